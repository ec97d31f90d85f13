#include "conelift/qp.hpp"

#include <vector>

namespace conelift::qp {
namespace {

double inf_norm(const Vector& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

bool try_active_set(const ConicProgram& prog, const std::vector<Eigen::Index>& active,
                    ipm::Result& result, double tol) {
  const Eigen::Index n = prog.num_variables();
  const Eigen::Index p = prog.A.rows();
  const auto k = static_cast<Eigen::Index>(active.size());
  const Eigen::Index dim = n + p + k;

  Matrix kkt = Matrix::Zero(dim, dim);
  if (prog.P.size() > 0) kkt.topLeftCorner(n, n) = prog.P;
  kkt.block(0, n, n, p) = prog.A.transpose();
  kkt.block(n, 0, p, n) = prog.A;
  Vector rhs(dim);
  rhs.head(n) = -prog.q;
  rhs.segment(n, p) = prog.b;
  for (Eigen::Index j = 0; j < k; ++j) {
    kkt.block(0, n + p + j, n, 1) = prog.G.row(active[j]).transpose();
    kkt.block(n + p + j, 0, 1, n) = prog.G.row(active[j]);
    rhs(n + p + j) = prog.h(active[j]);
  }
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
  const Vector sol = cod.solve(rhs);
  if (!sol.allFinite()) return false;
  const Vector x = sol.head(n);
  const Vector y = sol.segment(n, p);
  Vector z = Vector::Zero(prog.G.rows());
  for (Eigen::Index j = 0; j < k; ++j) z(active[j]) = sol(n + p + j);

  if (inf_norm(prog.A * x - prog.b) > tol * (1.0 + inf_norm(prog.b))) return false;
  const Vector slack = prog.h - prog.G * x;
  if (slack.size() && slack.minCoeff() < -tol * (1.0 + inf_norm(prog.h))) return false;
  if (z.size() && z.minCoeff() < -tol * (1.0 + inf_norm(z))) return false;
  Vector px = prog.P.size() > 0 ? Vector(prog.P * x) : Vector(Vector::Zero(n));
  const Vector rx = px + prog.q + prog.A.transpose() * y + prog.G.transpose() * z;
  if (inf_norm(rx) > tol * (1.0 + inf_norm(prog.q))) return false;
  const double obj = 0.5 * x.dot(px) + prog.q.dot(x);
  if (obj > result.primal_objective + tol * (1.0 + std::abs(result.primal_objective))) return false;

  result.x = x;
  result.y = y;
  result.z = z.cwiseMax(0.0);
  result.s = slack.cwiseMax(0.0);
  result.primal_objective = obj;
  result.gap = result.s.dot(result.z);
  result.primal_residual = 0.0;
  result.dual_residual = 0.0;
  result.status = ipm::Status::Optimal;
  return true;
}

enum class BlockState { Inactive, Zero, Boundary };

}  // namespace

bool polish_conic(const ConicProgram& prog, ipm::Result& result, double tol) {
  const Eigen::Index n = prog.num_variables();
  if (result.x.size() != n) return false;
  const Eigen::Index p = prog.A.rows();
  const int l = prog.orthant_rows;
  const std::vector<int>& soc = prog.soc_sizes;

  std::vector<Eigen::Index> active;
  for (int i = 0; i < l; ++i) {
    if (result.s(i) < result.z(i)) active.push_back(i);
  }
  std::vector<BlockState> state;
  std::vector<Eigen::Index> offset;
  Eigen::Index zero_rows = 0;
  int boundary = 0;
  {
    Eigen::Index off = l;
    for (int k : soc) {
      const Vector sb = result.s.segment(off, k);
      const Vector zb = result.z.segment(off, k);
      const double s_gap = sb(0) - sb.tail(k - 1).norm();
      const double z_gap = zb(0) - zb.tail(k - 1).norm();
      BlockState st = BlockState::Boundary;
      if (zb(0) < s_gap) {
        st = BlockState::Inactive;
      } else if (sb(0) < z_gap) {
        st = BlockState::Zero;
        zero_rows += k;
      } else {
        ++boundary;
      }
      state.push_back(st);
      offset.push_back(off);
      off += k;
    }
  }

  const auto k_act = static_cast<Eigen::Index>(active.size());
  const Eigen::Index dim = n + p + k_act + zero_rows + boundary;
  // Unknown layout: x | y | z_active | z_zero blocks | nu per boundary block.
  Vector u = Vector::Zero(dim);
  u.head(n) = result.x;
  u.segment(n, p) = result.y;
  for (Eigen::Index j = 0; j < k_act; ++j) u(n + p + j) = result.z(active[j]);
  {
    Eigen::Index zi = n + p + k_act;
    Eigen::Index ni = zi + zero_rows;
    for (std::size_t b = 0; b < soc.size(); ++b) {
      const int k = soc[b];
      if (state[b] == BlockState::Zero) {
        u.segment(zi, k) = result.z.segment(offset[b], k);
        zi += k;
      } else if (state[b] == BlockState::Boundary) {
        const double s0 = result.s(offset[b]);
        u(ni++) = s0 > 0.0 ? result.z(offset[b]) / s0 : 0.0;
      }
    }
  }

  auto jmul = [](Vector v) {
    v.tail(v.size() - 1) *= -1.0;
    return v;
  };

  Vector F(dim);
  Matrix J(dim, dim);
  auto evaluate = [&](const Vector& v, bool jacobian) {
    const Vector x = v.head(n);
    F.setZero();
    if (jacobian) J.setZero();
    Vector grad = prog.q + prog.A.transpose() * v.segment(n, p);
    if (prog.P.size() > 0) {
      grad += prog.P * x;
      if (jacobian) J.topLeftCorner(n, n) = prog.P;
    }
    if (jacobian) {
      J.block(0, n, n, p) = prog.A.transpose();
      J.block(n, 0, p, n) = prog.A;
    }
    F.segment(n, p) = prog.A * x - prog.b;
    Eigen::Index row = n + p;
    for (Eigen::Index j = 0; j < k_act; ++j, ++row) {
      const auto g = prog.G.row(active[j]);
      grad += g.transpose() * v(row);
      F(row) = g.dot(x) - prog.h(active[j]);
      if (jacobian) {
        J.block(0, row, n, 1) = g.transpose();
        J.block(row, 0, 1, n) = g;
      }
    }
    Eigen::Index ni = n + p + k_act + zero_rows;
    for (std::size_t b = 0; b < soc.size(); ++b) {
      const int k = soc[b];
      const auto Gb = prog.G.middleRows(offset[b], k);
      if (state[b] == BlockState::Zero) {
        grad += Gb.transpose() * v.segment(row, k);
        F.segment(row, k) = Gb * x - prog.h.segment(offset[b], k);
        if (jacobian) {
          J.block(0, row, n, k) = Gb.transpose();
          J.block(row, 0, k, n) = Gb;
        }
        row += k;
      } else if (state[b] == BlockState::Boundary) {
        const Vector sb = prog.h.segment(offset[b], k) - Gb * x;
        const Vector js = jmul(sb);
        const double nu = v(ni);
        grad += nu * (Gb.transpose() * js);
        F(ni) = 0.5 * sb.dot(js);
        if (jacobian) {
          Matrix jg = Gb;
          jg.bottomRows(k - 1) *= -1.0;
          J.topLeftCorner(n, n) -= nu * Gb.transpose() * jg;
          J.block(0, ni, n, 1) = Gb.transpose() * js;
          J.block(ni, 0, 1, n) = -(js.transpose() * Gb);
        }
        ++ni;
      }
    }
    F.head(n) = grad;
  };

  const double scale = 1.0 + inf_norm(prog.q) + inf_norm(prog.b) + inf_norm(prog.h);
  for (int it = 0; it < 30; ++it) {
    evaluate(u, true);
    if (inf_norm(F) <= 1e-14 * scale) break;
    const Vector step = Eigen::CompleteOrthogonalDecomposition<Matrix>(J).solve(-F);
    if (!step.allFinite()) return false;
    u += step;
  }
  evaluate(u, false);
  if (inf_norm(F) > 1e-12 * scale) return false;

  // Rebuild (s, z) and verify primal and dual feasibility.
  const Vector x = u.head(n);
  const Vector s = prog.h - prog.G * x;
  Vector z = Vector::Zero(prog.G.rows());
  for (Eigen::Index j = 0; j < k_act; ++j) z(active[j]) = u(n + p + j);
  {
    Eigen::Index zi = n + p + k_act;
    Eigen::Index ni = zi + zero_rows;
    for (std::size_t b = 0; b < soc.size(); ++b) {
      const int k = soc[b];
      if (state[b] == BlockState::Zero) {
        z.segment(offset[b], k) = u.segment(zi, k);
        zi += k;
      } else if (state[b] == BlockState::Boundary) {
        z.segment(offset[b], k) = u(ni++) * jmul(s.segment(offset[b], k));
      }
    }
  }
  const double ftol = tol * (1.0 + inf_norm(prog.h));
  const double ztol = tol * (1.0 + inf_norm(z));
  for (int i = 0; i < l; ++i) {
    if (s(i) < -ftol || z(i) < -ztol) return false;
  }
  for (std::size_t b = 0; b < soc.size(); ++b) {
    const int k = soc[b];
    const Vector sb = s.segment(offset[b], k);
    const Vector zb = z.segment(offset[b], k);
    if (sb.tail(k - 1).norm() - sb(0) > ftol) return false;
    if (zb.tail(k - 1).norm() - zb(0) > ztol) return false;
  }
  const Vector px = prog.P.size() > 0 ? Vector(prog.P * x) : Vector(Vector::Zero(n));
  const double obj = 0.5 * x.dot(px) + prog.q.dot(x);
  if (obj > result.primal_objective + tol * (1.0 + std::abs(result.primal_objective))) return false;

  result.x = x;
  result.y = u.segment(n, p);
  result.z = z;
  result.s = s;
  result.primal_objective = obj;
  result.gap = std::abs(s.dot(z));
  result.primal_residual = 0.0;
  result.dual_residual = 0.0;
  result.status = ipm::Status::Optimal;
  return true;
}

bool polish(const ConicProgram& prog, ipm::Result& result, double tol) {
  if (!prog.soc_sizes.empty() || result.x.size() != prog.num_variables()) return false;
  const Eigen::Index m = prog.G.rows();
  std::vector<Eigen::Index> by_ratio;
  std::vector<Eigen::Index> by_slack;
  const double scale = 1.0 + (m > 0 ? result.s.lpNorm<Eigen::Infinity>() : 0.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (result.s(i) < result.z(i)) by_ratio.push_back(i);
    if (result.s(i) <= 1e-7 * scale) by_slack.push_back(i);
  }
  if (try_active_set(prog, by_ratio, result, tol)) return true;
  if (by_slack != by_ratio && try_active_set(prog, by_slack, result, tol)) return true;
  return false;
}

ipm::Result solve(const ConicProgram& prog, const ipm::Options& opts) {
  ipm::Result r = ipm::solve(prog, opts);
  if (r.x.size() != prog.num_variables()) return r;
  if (prog.soc_sizes.empty()) {
    polish(prog, r);
  } else {
    // Also tried after a stall: degenerate optima without strict
    // complementarity stop the interior iteration short of tolerance.
    polish_conic(prog, r);
  }
  return r;
}

}  // namespace conelift::qp
