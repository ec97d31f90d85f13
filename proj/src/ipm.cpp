#include "conelift/ipm.hpp"

#include <cmath>
#include <limits>

namespace conelift::ipm {

namespace cone_ops {
namespace {

// (t - ||u||)(t + ||u||) evaluated without cancellation in the common case.
double jnorm_sq(double t, const Eigen::Ref<const Vector>& u) {
  const double nu = u.norm();
  return (t - nu) * (t + nu);
}

double socp_step(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& d) {
  const Eigen::Index k = u.size();
  const double u0 = u(0);
  const double d0 = d(0);
  const auto u1 = u.tail(k - 1);
  const auto d1 = d.tail(k - 1);
  const double a = d0 * d0 - d1.squaredNorm();
  const double b = 2.0 * (u0 * d0 - u1.dot(d1));
  const double c = std::max(jnorm_sq(u0, u1), 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  if (c == 0.0) return 0.0;
  const double scale = std::max({std::abs(a), std::abs(b), c});
  if (std::abs(a) <= 1e-15 * scale) {
    return b < 0.0 ? -c / b : inf;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    // A slightly negative discriminant is rounding on a path through the apex.
    if (a > 0.0 && b < 0.0 && disc >= -1e-10 * b * b) return -b / (2.0 * a);
    return inf;
  }
  const double sq = std::sqrt(disc);
  // stable roots
  const double qv = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  double r1 = qv / a;
  double r2 = (qv != 0.0) ? c / qv : inf;
  double best = inf;
  for (double r : {r1, r2}) {
    if (r > 0.0 && r < best) best = r;
  }
  return best;
}

}  // namespace

bool interior(const Vector& u, int orthant_rows, const std::vector<int>& soc) {
  for (int i = 0; i < orthant_rows; ++i) {
    if (!(u(i) > 0.0)) return false;
  }
  Eigen::Index off = orthant_rows;
  for (int k : soc) {
    if (!(u(off) > u.segment(off + 1, k - 1).norm())) return false;
    off += k;
  }
  return true;
}

Vector identity(int orthant_rows, const std::vector<int>& soc) {
  Eigen::Index total = orthant_rows;
  for (int k : soc) total += k;
  Vector e = Vector::Zero(total);
  e.head(orthant_rows).setOnes();
  Eigen::Index off = orthant_rows;
  for (int k : soc) {
    e(off) = 1.0;
    off += k;
  }
  return e;
}

Vector product(const Vector& u, const Vector& v, int orthant_rows, const std::vector<int>& soc) {
  Vector out(u.size());
  out.head(orthant_rows) = u.head(orthant_rows).cwiseProduct(v.head(orthant_rows));
  Eigen::Index off = orthant_rows;
  for (int k : soc) {
    const auto ub = u.segment(off, k);
    const auto vb = v.segment(off, k);
    out(off) = ub.dot(vb);
    out.segment(off + 1, k - 1) = ub(0) * vb.tail(k - 1) + vb(0) * ub.tail(k - 1);
    off += k;
  }
  return out;
}

Vector inverse_product(const Vector& u, const Vector& r, int orthant_rows,
                       const std::vector<int>& soc) {
  Vector x(u.size());
  x.head(orthant_rows) = r.head(orthant_rows).cwiseQuotient(u.head(orthant_rows));
  Eigen::Index off = orthant_rows;
  for (int k : soc) {
    const auto ub = u.segment(off, k);
    const auto rb = r.segment(off, k);
    const double det = jnorm_sq(ub(0), ub.tail(k - 1));
    const double x0 = (ub(0) * rb(0) - ub.tail(k - 1).dot(rb.tail(k - 1))) / det;
    x(off) = x0;
    x.segment(off + 1, k - 1) = (rb.tail(k - 1) - x0 * ub.tail(k - 1)) / ub(0);
    off += k;
  }
  return x;
}

double max_step(const Vector& u, const Vector& d, int orthant_rows, const std::vector<int>& soc) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < orthant_rows; ++i) {
    if (d(i) < 0.0) best = std::min(best, -u(i) / d(i));
  }
  Eigen::Index off = orthant_rows;
  for (int k : soc) {
    best = std::min(best, socp_step(u.segment(off, k), d.segment(off, k)));
    off += k;
  }
  return best;
}

Scaling::Scaling(const Vector& s, const Vector& z, int orthant_rows, const std::vector<int>& soc)
    : l_(orthant_rows), soc_(soc) {
  d_ = (s.head(l_).cwiseQuotient(z.head(l_))).cwiseSqrt();
  Eigen::Index off = l_;
  const double tiny = std::numeric_limits<double>::min();
  for (int k : soc_) {
    const auto sb = s.segment(off, k);
    const auto zb = z.segment(off, k);
    const double sj = std::max(jnorm_sq(sb(0), sb.tail(k - 1)), tiny);
    const double zj = std::max(jnorm_sq(zb(0), zb.tail(k - 1)), tiny);
    const Vector sbar = sb / std::sqrt(sj);
    const Vector zbar = zb / std::sqrt(zj);
    const double gamma = std::sqrt(std::max((1.0 + sbar.dot(zbar)) / 2.0, tiny));
    Vector w = sbar;
    w(0) += zbar(0);
    w.tail(k - 1) -= zbar.tail(k - 1);
    w /= 2.0 * gamma;
    // Guard the hyperbolic normalization w0^2 - ||w1||^2 = 1.
    w(0) = std::sqrt(1.0 + w.tail(k - 1).squaredNorm());
    beta_.push_back(std::pow(sj / zj, 0.25));
    w_.push_back(w);
    off += k;
  }
}

Vector Scaling::apply(const Vector& v) const {
  Vector out(v.size());
  out.head(l_) = d_.cwiseProduct(v.head(l_));
  Eigen::Index off = l_;
  for (size_t b = 0; b < soc_.size(); ++b) {
    const int k = soc_[b];
    const Vector& w = w_[b];
    const auto vb = v.segment(off, k);
    const double w1v1 = w.tail(k - 1).dot(vb.tail(k - 1));
    out(off) = beta_[b] * (w(0) * vb(0) + w1v1);
    out.segment(off + 1, k - 1) =
        beta_[b] * (vb(0) * w.tail(k - 1) + vb.tail(k - 1) + (w1v1 / (1.0 + w(0))) * w.tail(k - 1));
    off += k;
  }
  return out;
}

Vector Scaling::apply_inverse(const Vector& v) const {
  Vector out(v.size());
  out.head(l_) = v.head(l_).cwiseQuotient(d_);
  Eigen::Index off = l_;
  for (size_t b = 0; b < soc_.size(); ++b) {
    const int k = soc_[b];
    const Vector& w = w_[b];
    const auto vb = v.segment(off, k);
    const double w1v1 = w.tail(k - 1).dot(vb.tail(k - 1));
    out(off) = (w(0) * vb(0) - w1v1) / beta_[b];
    out.segment(off + 1, k - 1) =
        (-vb(0) * w.tail(k - 1) + vb.tail(k - 1) + (w1v1 / (1.0 + w(0))) * w.tail(k - 1)) /
        beta_[b];
    off += k;
  }
  return out;
}

Matrix Scaling::squared() const {
  Eigen::Index total = l_;
  for (int k : soc_) total += k;
  Matrix out = Matrix::Zero(total, total);
  for (int i = 0; i < l_; ++i) out(i, i) = d_(i) * d_(i);
  Eigen::Index off = l_;
  for (size_t b = 0; b < soc_.size(); ++b) {
    const int k = soc_[b];
    const Vector& w = w_[b];
    // W^2 = beta^2 (2 w w' - J)
    Matrix blk = 2.0 * w * w.transpose();
    blk(0, 0) -= 1.0;
    for (int i = 1; i < k; ++i) blk(i, i) += 1.0;
    out.block(off, off, k, k) = beta_[b] * beta_[b] * blk;
    off += k;
  }
  return out;
}

}  // namespace cone_ops

namespace {

using cone_ops::Scaling;

// Dense KKT system [[P, A', G'], [A, 0, 0], [G, 0, -W^2]] with static
// regularization and iterative refinement against the unregularized matrix.
class KktSolver {
 public:
  KktSolver(const ConicProgram& prog, const Matrix& w2, const Options& opts)
      : n_(prog.num_variables()), p_(prog.A.rows()), m_(prog.G.rows()), opts_(opts) {
    const Eigen::Index dim = n_ + p_ + m_;
    k_ = Matrix::Zero(dim, dim);
    if (prog.P.size() > 0) k_.topLeftCorner(n_, n_) = prog.P;
    k_.block(0, n_, n_, p_) = prog.A.transpose();
    k_.block(0, n_ + p_, n_, m_) = prog.G.transpose();
    k_.block(n_, 0, p_, n_) = prog.A;
    k_.block(n_ + p_, 0, m_, n_) = prog.G;
    k_.bottomRightCorner(m_, m_) = -w2;
    Matrix reg = k_;
    // Scale by the problem data only; W^2 can be huge near the boundary.
    const double data = k_.topRows(n_ + p_).cwiseAbs().maxCoeff();
    const double delta = opts.regularization * std::max(1.0, data);
    for (Eigen::Index i = 0; i < n_; ++i) reg(i, i) += delta;
    for (Eigen::Index i = n_; i < n_ + p_; ++i) reg(i, i) -= delta;
    for (Eigen::Index i = n_ + p_; i < dim; ++i) reg(i, i) -= delta;
    lu_.compute(reg);
  }

  Vector solve(const Vector& rhs) const {
    Vector sol = lu_.solve(rhs);
    for (int it = 0; it < opts_.refinement_steps; ++it) {
      const Vector res = rhs - k_ * sol;
      if (res.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) break;
      sol += lu_.solve(res);
    }
    return sol;
  }

 private:
  Eigen::Index n_, p_, m_;
  Options opts_;
  Matrix k_;
  Eigen::PartialPivLU<Matrix> lu_;
};

bool finite(const Vector& v) { return v.allFinite(); }

}  // namespace

Result solve(const ConicProgram& prog, const Options& opts) {
  const int n = prog.num_variables();
  const Eigen::Index p = prog.A.rows();
  const Eigen::Index m = prog.G.rows();
  const int l = prog.orthant_rows;
  const std::vector<int>& soc = prog.soc_sizes;
  const auto degree = static_cast<double>(l + static_cast<int>(soc.size()));
  const Vector e = cone_ops::identity(l, soc);

  auto quad = [&](const Vector& x) -> Vector {
    return prog.P.size() > 0 ? Vector(prog.P * x) : Vector(Vector::Zero(n));
  };

  Result res;
  Vector x, y, s, z;

  // Initial point from the KKT system with W = I.
  {
    KktSolver kkt(prog, Matrix::Identity(m, m), opts);
    Vector rhs(n + p + m);
    rhs << -prog.q, prog.b, prog.h;
    const Vector sol = kkt.solve(rhs);
    x = sol.head(n);
    y = sol.segment(n, p);
    z = sol.tail(m);
    s = -z;
    auto shift = [&](Vector& v) {
      if (m == 0) return;
      const double nrm = v.norm();
      // smallest t with v + t e in the cone
      double t = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < l; ++i) t = std::max(t, -v(i));
      Eigen::Index off = l;
      for (int k : soc) {
        t = std::max(t, v.segment(off + 1, k - 1).norm() - v(off));
        off += k;
      }
      if (t >= -1e-8 * std::max(nrm, 1.0)) v += (1.0 + t) * e;
    };
    shift(s);
    shift(z);
  }

  const double resx0 = std::max(1.0, prog.q.norm());
  const double resy0 = std::max(1.0, p > 0 ? prog.b.norm() : 0.0);
  const double resz0 = std::max(1.0, m > 0 ? prog.h.norm() : 0.0);

  auto finish = [&](Status st, int iters, double gap, double pres, double dres) {
    res.status = st;
    res.x = x;
    res.y = y;
    res.s = s;
    res.z = z;
    res.iterations = iters;
    res.gap = gap;
    res.primal_residual = pres;
    res.dual_residual = dres;
    res.primal_objective = 0.5 * x.dot(quad(x)) + prog.q.dot(x);
    return res;
  };

  // Best iterate seen, for graceful exit on numerical trouble.
  double best_merit = std::numeric_limits<double>::infinity();
  Vector bx, by, bs, bz;
  double bgap = 0, bpres = 0, bdres = 0;
  bool numerical_trouble = false;

  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    const Vector px = quad(x);
    const Vector rx = px + prog.q + prog.A.transpose() * y + prog.G.transpose() * z;
    const Vector ry = prog.A * x - prog.b;
    const Vector rz = prog.G * x + s - prog.h;
    const double gap = m > 0 ? s.dot(z) : 0.0;
    const double pcost = 0.5 * x.dot(px) + prog.q.dot(x);
    const double dcost = pcost + y.dot(ry) + z.dot(rz) - gap;
    double relgap = std::numeric_limits<double>::infinity();
    if (dcost < 0.0) relgap = gap / -dcost;
    if (pcost > 0.0) relgap = gap / pcost;
    const double pres = std::max(p > 0 ? ry.norm() / resy0 : 0.0, m > 0 ? rz.norm() / resz0 : 0.0);
    const double dres = rx.norm() / resx0;

    const double merit = std::max({pres, dres, std::min(gap, relgap)});
    if (merit < best_merit) {
      best_merit = merit;
      bx = x;
      by = y;
      bs = s;
      bz = z;
      bgap = gap;
      bpres = pres;
      bdres = dres;
    }

    if (pres <= opts.feasibility_tolerance && dres <= opts.feasibility_tolerance &&
        (gap <= opts.absolute_gap || relgap <= opts.relative_gap)) {
      return finish(Status::Optimal, iter, gap, pres, dres);
    }
    if (iter == opts.max_iterations) break;

    if (m == 0) {
      // Equality-constrained QP: a single Newton step is exact.
      KktSolver kkt(prog, Matrix(0, 0), opts);
      Vector rhs(n + p);
      rhs << -rx, -ry;
      const Vector sol = kkt.solve(rhs);
      x += sol.head(n);
      y += sol.segment(n, p);
      continue;
    }

    const Scaling w(s, z, l, soc);
    const Vector lambda = w.apply(z);
    const Vector lambda_sq = cone_ops::product(lambda, lambda, l, soc);
    const double mu = gap / degree;
    KktSolver kkt(prog, w.squared(), opts);

    Vector dsa_scaled, dza_scaled;
    double sigma = 0.0;
    Vector dx, dy, dz, ds;
    double step = 0.0;
    bool ok = true;
    for (int pass = 0; pass < 2; ++pass) {
      Vector rs = -lambda_sq;
      if (pass == 1) {
        rs -= cone_ops::product(dsa_scaled, dza_scaled, l, soc);
        rs += sigma * mu * e;
      }
      const Vector lr = cone_ops::inverse_product(lambda, rs, l, soc);
      Vector rhs(n + p + m);
      rhs << -(1.0 - sigma) * rx, -(1.0 - sigma) * ry, -(1.0 - sigma) * rz - w.apply(lr);
      const Vector sol = kkt.solve(rhs);
      if (!finite(sol)) {
        ok = false;
        break;
      }
      dx = sol.head(n);
      dy = sol.segment(n, p);
      dz = sol.tail(m);
      const Vector dz_scaled = w.apply(dz);
      // Taking ds from the linear rows keeps G x + s = h exact along the path.
      ds = -(1.0 - sigma) * rz - prog.G * dx;
      const Vector ds_scaled = w.apply_inverse(ds);
      const double amax = std::min(cone_ops::max_step(lambda, ds_scaled, l, soc),
                                   cone_ops::max_step(lambda, dz_scaled, l, soc));
      if (pass == 0) {
        const double alpha = std::min(1.0, amax);
        sigma = std::pow(1.0 - alpha, 3.0);
        dsa_scaled = ds_scaled;
        dza_scaled = dz_scaled;
      } else {
        step = std::min(1.0, opts.step_fraction * amax);
      }
    }
    if (!ok || step <= 1e-14) {
      numerical_trouble = true;
      break;
    }
    // Guard against rounding pushing an iterate out of the cone.
    for (int tries = 0; tries < 30 && !(cone_ops::interior(s + step * ds, l, soc) &&
                                        cone_ops::interior(z + step * dz, l, soc));
         ++tries) {
      step *= 0.5;
    }
    x += step * dx;
    y += step * dy;
    s += step * ds;
    z += step * dz;
    if (!finite(x) || !finite(s) || !finite(z)) {
      numerical_trouble = true;
      break;
    }
  }

  x = bx;
  y = by;
  s = bs;
  z = bz;
  const bool close = bpres <= 1e3 * opts.feasibility_tolerance &&
                     bdres <= 1e3 * opts.feasibility_tolerance &&
                     bgap <= 1e4 * std::max(opts.absolute_gap, opts.relative_gap);
  const Status st = close ? Status::Optimal
                          : (numerical_trouble ? Status::NumericalFailure : Status::IterationLimit);
  return finish(st, opts.max_iterations, bgap, bpres, bdres);
}

}  // namespace conelift::ipm
