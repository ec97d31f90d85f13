#include "conelift/solver.hpp"

#include <cmath>
#include <limits>

#include "conelift/qp.hpp"

namespace conelift {

// ---------------------------------------------------------------------------
// Functionals

NormExpr NormExpr::direct_sum(NormTag tag, const std::vector<int>& sizes) {
  int total = 0;
  for (int k : sizes) total += k;
  NormExpr e;
  e.tag = tag;
  int off = 0;
  for (int k : sizes) {
    Matrix sel = Matrix::Zero(k, total);
    sel.middleCols(off, k).setIdentity();
    e.blocks.push_back(std::move(sel));
    off += k;
  }
  return e;
}

NormExpr NormExpr::seminorm(Matrix R, NormTag tag) {
  NormExpr e;
  e.tag = tag;
  e.blocks.push_back(std::move(R));
  return e;
}

int NormExpr::dim() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().cols()); }

double NormExpr::evaluate(const Vector& c) const {
  double sum = 0.0;
  for (const auto& R : blocks) sum += norm(tag, R * c);
  return sum;
}

double NormExpr::max_block(const Vector& c) const {
  double best = 0.0;
  for (const auto& R : blocks) best = std::max(best, norm(tag, R * c));
  return best;
}

double Functional::evaluate(const Vector& c) const {
  if (const auto* e = std::get_if<NormExpr>(&expr)) return e->evaluate(c);
  return std::get<Vector>(expr).dot(c);
}

bool Functional::is_polyhedral() const {
  if (const auto* e = std::get_if<NormExpr>(&expr)) return e->is_polyhedral();
  return true;
}

double Objective::evaluate(const Vector& c) const {
  switch (kind) {
    case Kind::Norm:
      return norm.evaluate(c);
    case Kind::MaxBlock:
      return norm.max_block(c);
    case Kind::SquaredEuclidean:
      return center.size() ? (c - center).norm() : c.norm();
    case Kind::Linear:
      return linear.dot(c);
  }
  return 0.0;
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::IterationLimit:
      return "iteration_limit";
  }
  return "?";
}

MinNormProblem MinNormProblem::with_norm(Matrix T, Vector x, Cone cone, NormTag tag) {
  const std::vector<int> blocks = cone.norm_blocks();
  return MinNormProblem{std::move(T), std::move(x), std::move(cone),
                        Objective::of_norm(NormExpr::direct_sum(tag, blocks)),
                        {}};
}

void MinNormProblem::validate() const {
  require_dim(equality_matrix.cols(), cone.ambient_dim(), "equality matrix columns vs cone");
  require_dim(target.size(), equality_matrix.rows(), "target vs equality matrix rows");
  const int m = cone.ambient_dim();
  if (objective.kind == Objective::Kind::Norm || objective.kind == Objective::Kind::MaxBlock) {
    require_dim(objective.norm.dim(), m, "objective norm");
  }
  if (objective.kind == Objective::Kind::SquaredEuclidean && objective.center.size()) {
    require_dim(objective.center.size(), m, "objective center");
  }
  if (objective.kind == Objective::Kind::Linear) require_dim(objective.linear.size(), m, "objective");
  for (const auto& b : bounds) {
    if (const auto* e = std::get_if<NormExpr>(&b.functional.expr)) {
      require_dim(e->dim(), m, "bound functional");
    } else {
      require_dim(std::get<Vector>(b.functional.expr).size(), m, "bound functional");
    }
  }
}

// ---------------------------------------------------------------------------
// Lowering helpers

namespace {

/// Adds epigraph variables for  sum_b ||R_b c||  and returns a row r with
/// r * v >= sum_b ||R_b c|| (tight at optimum).
Vector add_norm_epigraph(ProgramBuilder& b, const NormExpr& e, int m) {
  std::vector<std::pair<int, double>> terms;
  for (const auto& R : e.blocks) {
    const auto k = static_cast<int>(R.rows());
    switch (e.tag) {
      case NormTag::L2: {
        const int t = b.add_variables(1);
        Matrix rows = Matrix::Zero(k + 1, b.num_variables());
        rows(0, t) = 1.0;
        rows.block(1, 0, k, m) = R;
        b.add_second_order(rows, Vector::Zero(k + 1));
        terms.emplace_back(t, 1.0);
        break;
      }
      case NormTag::L1: {
        const int u = b.add_variables(k);
        Matrix plus = Matrix::Zero(k, b.num_variables());
        plus.middleCols(u, k).setIdentity();
        Matrix minus = plus;
        plus.leftCols(m) -= R;
        minus.leftCols(m) += R;
        b.add_nonnegative(plus, Vector::Zero(k));
        b.add_nonnegative(minus, Vector::Zero(k));
        for (int i = 0; i < k; ++i) terms.emplace_back(u + i, 1.0);
        break;
      }
      case NormTag::Linf: {
        const int t = b.add_variables(1);
        Matrix plus = Matrix::Zero(k, b.num_variables());
        plus.col(t).setOnes();
        Matrix minus = plus;
        plus.leftCols(m) -= R;
        minus.leftCols(m) += R;
        b.add_nonnegative(plus, Vector::Zero(k));
        b.add_nonnegative(minus, Vector::Zero(k));
        terms.emplace_back(t, 1.0);
        break;
      }
    }
  }
  Vector row = Vector::Zero(b.num_variables());
  for (const auto& [idx, coef] : terms) row(idx) += coef;
  return row;
}

/// Adds t >= max_b ||R_b c|| and returns the index of t.
int add_max_epigraph(ProgramBuilder& b, const NormExpr& e, int m) {
  const int t = b.add_variables(1);
  for (const auto& R : e.blocks) {
    NormExpr single = NormExpr::seminorm(R, e.tag);
    const Vector row = add_norm_epigraph(b, single, m);
    Matrix r = Matrix::Zero(1, b.num_variables());
    r(0, t) = 1.0;
    r.leftCols(row.size()) -= row.transpose();
    b.add_nonnegative(r, Vector::Zero(1));
  }
  return t;
}

/// functional(c) <= upper + slack_var (slack_var < 0 means no slack).
void add_bound(ProgramBuilder& b, const Bound& bound, int m, int slack_var) {
  Vector row;
  if (const auto* e = std::get_if<NormExpr>(&bound.functional.expr)) {
    row = add_norm_epigraph(b, *e, m);
  } else {
    row = Vector::Zero(b.num_variables());
    row.head(m) = std::get<Vector>(bound.functional.expr);
  }
  Matrix r = Matrix::Zero(1, b.num_variables());
  r.leftCols(row.size()) = -row.transpose();
  if (slack_var >= 0) r(0, slack_var) += 1.0;
  b.add_nonnegative(r, Vector::Constant(1, bound.upper));
}

bool bounds_polyhedral(const std::vector<Bound>& bounds) {
  for (const auto& b : bounds) {
    if (!b.functional.is_polyhedral()) return false;
  }
  return true;
}

struct Violation {
  double equality = 0.0;
  double cone = 0.0;
};

Violation program_violation(const ConicProgram& prog, const Vector& v, Eigen::Index skip_eq_rows) {
  Violation out;
  if (prog.A.rows() > skip_eq_rows) {
    const Eigen::Index rows = prog.A.rows() - skip_eq_rows;
    out.cone = (prog.A.bottomRows(rows) * v - prog.b.tail(rows)).lpNorm<Eigen::Infinity>();
  }
  const Vector slack = prog.h - prog.G * v;
  for (int i = 0; i < prog.orthant_rows; ++i) out.cone = std::max(out.cone, -slack(i));
  Eigen::Index off = prog.orthant_rows;
  for (int k : prog.soc_sizes) {
    const double gap = slack.segment(off + 1, k - 1).norm() - slack(off);
    out.cone = std::max(out.cone, gap);
    off += k;
  }
  out.cone = std::max(out.cone, 0.0);
  return out;
}

bool zero_is_admissible(const MinNormProblem& p) {
  for (const auto& b : p.bounds) {
    if (b.upper < 0.0) return false;
  }
  return true;
}

bool in_slice(const MinNormProblem& p, const Vector& c) {
  const double scale = std::max(1.0, p.target.norm());
  if ((p.equality_matrix * c - p.target).norm() > 1e-12 * scale) return false;
  if (!contains(p.cone, c, 1e-12)) return false;
  for (const auto& b : p.bounds) {
    if (b.functional.evaluate(c) > b.upper) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Feasibility

Feasibility check_feasible(const Cone& cone, const Matrix& T, const Vector& x,
                           const std::vector<Bound>& bounds, const SolverOptions& opts) {
  require_dim(T.cols(), cone.ambient_dim(), "check_feasible: map columns vs cone");
  require_dim(x.size(), T.rows(), "check_feasible: target");
  const int m = cone.ambient_dim();
  const auto d = static_cast<int>(T.rows());
  Feasibility out;

  if (cone.is_polyhedral() && bounds_polyhedral(bounds)) {
    ProgramBuilder b(m);
    b.add_equality(T, x);
    lower(cone, b, Matrix::Identity(m, m));
    for (const auto& bound : bounds) add_bound(b, bound, m, -1);
    const auto prog = b.build();
    const auto r = lp::solve(prog, opts.simplex);
    out.exact = true;
    out.feasible = r.status != lp::Status::Infeasible;
    if (!out.feasible) {
      out.certificate = r.farkas_eq.head(d);
      const double scale = out.certificate.lpNorm<Eigen::Infinity>();
      if (scale > 0.0) out.certificate /= scale;
    }
    return out;
  }

  // min t + sum(slack) + delta/2 ||c||^2  s.t.  |T c - x| <= t, c in C, bounds relaxed by slack.
  ProgramBuilder b(m);
  const int t = b.add_variables(1);
  {
    Matrix plus = Matrix::Zero(d, b.num_variables());
    plus.leftCols(m) = -T;
    plus.col(t).setOnes();
    Matrix minus = plus;
    minus.leftCols(m) = T;
    b.add_nonnegative(plus, x);    // t - (T c - x) >= 0
    b.add_nonnegative(minus, -x);  // t + (T c - x) >= 0
  }
  lower(cone, b, Matrix::Identity(m, m));
  std::vector<int> slacks;
  for (const auto& bound : bounds) {
    const int s = b.add_variables(1);
    slacks.push_back(s);
    b.add_nonnegative(b.selector(s, 1), Vector::Zero(1));
    add_bound(b, bound, m, s);
  }
  Vector lin = Vector::Zero(b.num_variables());
  lin(t) = 1.0;
  for (int s : slacks) lin(s) = 1.0;
  b.add_linear_objective(lin);
  const double delta = 1e-10;
  b.add_quadratic_objective(delta * Matrix::Identity(m, m));
  const auto prog = b.build();
  const auto r = qp::solve(prog, opts.ipm);

  const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
  const double thresh = 1e-8 * scale;
  double worst = r.x(t);
  for (int s : slacks) worst = std::max(worst, r.x(s));
  out.residual = std::max(worst, 0.0);
  out.feasible = worst <= thresh;
  if (!out.feasible) {
    // Multipliers of the residual rows give the separating vector.
    Vector y = r.z.segment(d, d) - r.z.head(d);
    const double n = y.lpNorm<Eigen::Infinity>();
    if (n > 0.0) y /= n;
    out.certificate = y;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Min-norm programs

Solution solve_min_norm(const MinNormProblem& p, const SolverOptions& opts) {
  p.validate();
  const int m = p.cone.ambient_dim();
  const auto d = static_cast<int>(p.equality_matrix.rows());
  Solution sol;

  const bool zero_minimizes =
      p.objective.kind == Objective::Kind::Norm || p.objective.kind == Objective::Kind::MaxBlock ||
      (p.objective.kind == Objective::Kind::SquaredEuclidean &&
       (p.objective.center.size() == 0 || p.objective.center.isZero(0.0)));
  if (zero_minimizes && p.target.isZero(0.0) && zero_is_admissible(p)) {
    sol.status = SolveStatus::Optimal;
    sol.point = Vector::Zero(m);
    sol.value = 0.0;
    return sol;
  }

  if (p.objective.kind == Objective::Kind::SquaredEuclidean && p.objective.center.size() &&
      in_slice(p, p.objective.center)) {
    sol.status = SolveStatus::Optimal;
    sol.point = p.objective.center;
    sol.value = 0.0;
    sol.equality_residual = (p.equality_matrix * sol.point - p.target).norm();
    return sol;
  }

  ProgramBuilder b(m);
  b.add_equality(p.equality_matrix, p.target);
  lower(p.cone, b, Matrix::Identity(m, m));
  for (const auto& bound : p.bounds) add_bound(b, bound, m, -1);

  bool polyhedral_objective = true;
  switch (p.objective.kind) {
    case Objective::Kind::Norm: {
      if (p.objective.norm.tag == NormTag::L2 && p.objective.norm.blocks.size() == 1) {
        // Same minimizers as 1/2 ||R c||^2, which the QP path resolves more sharply.
        const Matrix& R = p.objective.norm.blocks.front();
        b.add_quadratic_objective(R.transpose() * R);
        polyhedral_objective = false;
        break;
      }
      const Vector row = add_norm_epigraph(b, p.objective.norm, m);
      b.add_linear_objective(row);
      polyhedral_objective = p.objective.norm.is_polyhedral();
      break;
    }
    case Objective::Kind::MaxBlock: {
      const int t = add_max_epigraph(b, p.objective.norm, m);
      Vector row = Vector::Zero(b.num_variables());
      row(t) = 1.0;
      b.add_linear_objective(row);
      polyhedral_objective = p.objective.norm.is_polyhedral();
      break;
    }
    case Objective::Kind::SquaredEuclidean:
      b.add_quadratic_objective(Matrix::Identity(m, m));
      if (p.objective.center.size()) b.add_linear_objective(-p.objective.center);
      polyhedral_objective = false;
      break;
    case Objective::Kind::Linear:
      b.add_linear_objective(p.objective.linear);
      break;
  }
  const ConicProgram prog = b.build();
  const double scale = std::max(1.0, p.target.lpNorm<Eigen::Infinity>());

  Vector v;
  bool converged = false;
  if (polyhedral_objective && p.cone.is_polyhedral() && bounds_polyhedral(p.bounds)) {
    std::vector<int> order;
    if (opts.lexicographic) {
      for (int i = 0; i < m; ++i) order.push_back(i);
    }
    const lp::Result r = lp::solve_lexicographic(prog, order, 1e-9, opts.simplex);
    if (r.status == lp::Status::Infeasible) {
      sol.status = SolveStatus::Infeasible;
      sol.certificate = r.farkas_eq.head(d);
      const double n = sol.certificate.lpNorm<Eigen::Infinity>();
      if (n > 0.0) sol.certificate /= n;
      return sol;
    }
    if (r.status == lp::Status::Unbounded) {
      sol.status = SolveStatus::IterationLimit;
      sol.value = -std::numeric_limits<double>::infinity();
      return sol;
    }
    converged = r.status == lp::Status::Optimal;
    v = r.x;
  } else {
    const ipm::Result r = qp::solve(prog, opts.ipm);
    converged = r.status == ipm::Status::Optimal;
    v = r.x;
  }

  if (v.size() == prog.num_variables()) {
    sol.point = v.head(m);
    sol.equality_residual = (p.equality_matrix * sol.point - p.target).norm();
    sol.cone_violation = program_violation(prog, v, d).cone;
    sol.value = p.objective.evaluate(sol.point);
  }
  const double ftol = 1e3 * opts.tol.feasibility * scale;
  if (converged && sol.equality_residual <= ftol && sol.cone_violation <= ftol) {
    sol.status = SolveStatus::Optimal;
    return sol;
  }

  const Feasibility f = check_feasible(p.cone, p.equality_matrix, p.target, p.bounds, opts);
  if (!f.feasible) {
    sol.status = SolveStatus::Infeasible;
    sol.certificate = f.certificate;
    sol.point = Vector();
    return sol;
  }
  sol.status = SolveStatus::IterationLimit;
  return sol;
}

Vector project_onto_slice(const Cone& cone, const Matrix& T, const Vector& x, const Vector& z,
                          const std::vector<Bound>& bounds, const SolverOptions& opts) {
  require_dim(z.size(), cone.ambient_dim(), "project_onto_slice: point");
  MinNormProblem p{T, x, cone, Objective::euclidean(z), bounds};
  const Solution s = solve_min_norm(p, opts);
  if (s.status == SolveStatus::Infeasible) {
    throw InfeasibleError("project_onto_slice: slice is empty", s.certificate);
  }
  if (s.status != SolveStatus::Optimal) {
    throw SolverError("project_onto_slice: solver did not converge");
  }
  return s.point;
}

}  // namespace conelift
