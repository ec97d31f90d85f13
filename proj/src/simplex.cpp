#include "conelift/simplex.hpp"

#include <cmath>
#include <limits>

namespace conelift::lp {
namespace {

class Tableau {
 public:
  Tableau(const Matrix& A, const Vector& b, const SimplexOptions& opts)
      : m_(A.rows()), n_(A.cols()), opts_(opts) {
    t_ = Matrix::Zero(m_ + 1, n_ + m_ + 1);
    sign_ = Vector::Ones(m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (b(i) < 0) sign_(i) = -1.0;
      t_.row(i).head(n_) = sign_(i) * A.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = sign_(i) * b(i);
    }
    basis_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) basis_[i] = n_ + i;
    max_iter_ = opts.max_iterations > 0
                    ? opts.max_iterations
                    : 10L * static_cast<long>((m_ + n_) * (m_ + n_)) + 100;
  }

  Eigen::Index rhs() const { return n_ + m_; }

  void load_costs(const Vector& cost) {
    // cost covers all n_ + m_ columns
    t_.row(m_).setZero();
    t_.row(m_).head(n_ + m_) = cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double cb = cost(basis_[i]);
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  // Returns Optimal, Unbounded or IterationLimit.
  Status run(Eigen::Index allowed_cols) {
    const double tol = opts_.pivot_tolerance;
    while (true) {
      if (iterations_ >= max_iter_) return Status::IterationLimit;
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (t_(m_, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::Optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= tol) continue;
        const double ratio = t_(i, rhs()) / a;
        if (ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && leave >= 0 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return Status::Unbounded;
      pivot(leave, enter);
      ++iterations_;
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // Pivot artificial variables out of the basis where possible.
  void expel_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      Eigen::Index best = -1;
      double best_abs = opts_.pivot_tolerance;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > best_abs) {
          best_abs = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best >= 0) pivot(i, best);
    }
  }

  double objective() const { return -t_(m_, rhs()); }
  double reduced_cost(Eigen::Index j) const { return t_(m_, j); }

  // Recomputes basic values from the original system for accuracy.
  Vector primal(const Matrix& A, const Vector& b) const {
    Vector x = Vector::Zero(n_);
    Matrix B(m_, m_);
    Vector rhs_vec(m_);
    for (Eigen::Index i = 0; i < m_; ++i) rhs_vec(i) = sign_(i) * b(i);
    for (Eigen::Index k = 0; k < m_; ++k) {
      const Eigen::Index j = basis_[k];
      if (j < n_) {
        for (Eigen::Index i = 0; i < m_; ++i) B(i, k) = sign_(i) * A(i, j);
      } else {
        B.col(k).setZero();
        B(j - n_, k) = 1.0;
      }
    }
    Vector xb;
    bool refined = false;
    if (m_ > 0) {
      Eigen::FullPivLU<Matrix> lu(B);
      if (lu.isInvertible()) {
        xb = lu.solve(rhs_vec);
        refined = (B * xb - rhs_vec).lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + rhs_vec.lpNorm<Eigen::Infinity>());
      }
    }
    for (Eigen::Index k = 0; k < m_; ++k) {
      const Eigen::Index j = basis_[k];
      if (j >= n_) continue;
      const double v = refined ? xb(k) : t_(k, rhs());
      x(j) = std::max(0.0, v);
    }
    return x;
  }

  Vector duals_from_artificials(double artificial_cost) const {
    Vector y(m_);
    for (Eigen::Index i = 0; i < m_; ++i) y(i) = sign_(i) * (artificial_cost - t_(m_, n_ + i));
    return y;
  }

  long iterations() const { return iterations_; }
  Eigen::Index rows() const { return m_; }
  Eigen::Index cols() const { return n_; }

 private:
  Eigen::Index m_;
  Eigen::Index n_;
  SimplexOptions opts_;
  Matrix t_;
  Vector sign_;
  std::vector<Eigen::Index> basis_;
  long iterations_ = 0;
  long max_iter_ = 0;
};

}  // namespace

StandardResult solve_standard(const Matrix& A, const Vector& b, const Vector& c,
                              const SimplexOptions& opts) {
  require_dim(b.size(), A.rows(), "simplex rhs");
  require_dim(c.size(), A.cols(), "simplex cost");
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  StandardResult res;

  Tableau tab(A, b, opts);
  Vector phase1 = Vector::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.load_costs(phase1);
  Status st = tab.run(n);
  res.iterations = tab.iterations();
  if (st == Status::IterationLimit) {
    res.status = st;
    return res;
  }
  const double infeas = tab.objective();
  const double scale = 1.0 + (m > 0 ? b.lpNorm<Eigen::Infinity>() : 0.0);
  if (infeas > opts.feasibility_tolerance * scale) {
    res.status = Status::Infeasible;
    res.y = tab.duals_from_artificials(1.0);
    res.value = infeas;
    return res;
  }

  tab.expel_artificials();
  Vector phase2 = Vector::Zero(n + m);
  phase2.head(n) = c;
  tab.load_costs(phase2);
  st = tab.run(n);
  res.iterations = tab.iterations();
  res.status = st;
  if (st != Status::Optimal) return res;
  res.x = tab.primal(A, b);
  res.y = tab.duals_from_artificials(0.0);
  res.value = c.dot(res.x);
  return res;
}

Result solve(const ConicProgram& prog, const SimplexOptions& opts) {
  if (!prog.is_linear_program()) {
    throw UnsupportedError("simplex: program has second-order blocks or a quadratic objective");
  }
  const Eigen::Index n = prog.num_variables();
  const Eigen::Index p = prog.A.rows();
  const Eigen::Index l = prog.G.rows();
  Matrix As = Matrix::Zero(p + l, 2 * n + l);
  Vector bs(p + l);
  if (p > 0) {
    As.block(0, 0, p, n) = prog.A;
    As.block(0, n, p, n) = -prog.A;
    bs.head(p) = prog.b;
  }
  if (l > 0) {
    As.block(p, 0, l, n) = prog.G;
    As.block(p, n, l, n) = -prog.G;
    As.block(p, 2 * n, l, l).setIdentity();
    bs.tail(l) = prog.h;
  }
  Vector cs = Vector::Zero(2 * n + l);
  cs.head(n) = prog.q;
  cs.segment(n, n) = -prog.q;

  const StandardResult sr = solve_standard(As, bs, cs, opts);
  Result res;
  res.status = sr.status;
  res.iterations = sr.iterations;
  if (sr.status == Status::Optimal) {
    res.x = sr.x.head(n) - sr.x.segment(n, n);
    res.value = prog.q.dot(res.x);
  } else if (sr.status == Status::Infeasible) {
    res.farkas_eq = sr.y.head(p);
    res.farkas_cone = sr.y.tail(l);
  }
  return res;
}

Result solve_lexicographic(const ConicProgram& prog, const std::vector<int>& order, double slack,
                           const SimplexOptions& opts) {
  Result base = solve(prog, opts);
  if (base.status != Status::Optimal || order.empty()) return base;

  const Eigen::Index n = prog.num_variables();
  ConicProgram stage = prog;
  auto append_upper = [&stage, n](const Vector& row, double bound) {
    // row'v <= bound  as an orthant row of G v + s = h.
    Matrix G(stage.G.rows() + 1, n);
    Vector h(stage.h.size() + 1);
    G.topRows(stage.orthant_rows) = stage.G.topRows(stage.orthant_rows);
    h.head(stage.orthant_rows) = stage.h.head(stage.orthant_rows);
    G.row(stage.orthant_rows) = row.transpose();
    h(stage.orthant_rows) = bound;
    const Eigen::Index rest = stage.G.rows() - stage.orthant_rows;
    G.bottomRows(rest) = stage.G.bottomRows(rest);
    h.tail(rest) = stage.h.tail(rest);
    stage.G = G;
    stage.h = h;
    stage.orthant_rows += 1;
  };
  append_upper(prog.q, base.value + slack * std::max(1.0, std::abs(base.value)));

  Result last = base;
  for (const int k : order) {
    stage.q = Vector::Zero(n);
    stage.q(k) = 1.0;
    Result r = solve(stage, opts);
    if (r.status != Status::Optimal) break;
    last = r;
    append_upper(stage.q, r.x(k));
  }
  last.value = prog.q.dot(last.x);
  last.iterations += base.iterations;
  return last;
}

}  // namespace conelift::lp
