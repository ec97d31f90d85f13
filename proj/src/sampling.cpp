#include "conelift/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/QR>

namespace conelift {

namespace {

int lattice_extent(int d) {
  // Roughly 600 lattice points before reduction to primitive ones.
  const double per_axis = std::pow(600.0, 1.0 / d);
  return std::max(1, static_cast<int>(std::floor((per_axis - 1.0) / 2.0)));
}

int gcd_of(const std::vector<int>& v) {
  int g = 0;
  for (int a : v) g = std::gcd(g, std::abs(a));
  return g;
}

}  // namespace

std::vector<Vector> sphere_directions(int d, NormTag tag, const SamplerConfig& cfg) {
  if (d <= 0) throw DimensionError("sphere_directions: dimension must be positive");
  std::vector<Vector> out;
  const int L = lattice_extent(d);
  std::vector<int> idx(static_cast<std::size_t>(d), -L);
  while (true) {
    if (gcd_of(idx) == 1) {
      Vector v(d);
      for (int i = 0; i < d; ++i) v(i) = idx[static_cast<std::size_t>(i)];
      out.push_back(v / norm(tag, v));
    }
    int k = 0;
    while (k < d && idx[static_cast<std::size_t>(k)] == L) idx[static_cast<std::size_t>(k++)] = -L;
    if (k == d) break;
    ++idx[static_cast<std::size_t>(k)];
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> g;
  for (int s = 0; s < cfg.samples; ++s) {
    Vector v(d);
    do {
      for (int i = 0; i < d; ++i) v(i) = g(rng);
    } while (v.norm() == 0.0);
    out.push_back(v / norm(tag, v));
  }
  return out;
}

std::vector<Vector> ball_vertices(int d, NormTag tag) {
  std::vector<Vector> out;
  if (tag == NormTag::L1) {
    for (int i = 0; i < d; ++i) {
      out.push_back(Vector::Unit(d, i));
      out.push_back(-Vector::Unit(d, i));
    }
  } else if (tag == NormTag::Linf) {
    if (d > 20) throw UnsupportedError("ball_vertices: too many cube vertices");
    for (long mask = 0; mask < (1L << d); ++mask) {
      Vector v(d);
      for (int i = 0; i < d; ++i) v(i) = (mask >> i) & 1 ? -1.0 : 1.0;
      out.push_back(v);
    }
  }
  return out;
}

DirectionValue refine_on_sphere(const std::function<double(const Vector&)>& f, Vector start,
                                double start_value, double initial_step, double final_step) {
  const Eigen::Index d = start.size();
  DirectionValue best{start / start.norm(), start_value};
  if (d < 2) return best;
  double h = initial_step;
  while (h >= final_step) {
    // Orthonormal basis of the tangent space at the current point.
    const Matrix q = Eigen::HouseholderQR<Matrix>(best.direction).householderQ();
    bool improved = false;
    for (Eigen::Index j = 1; j < d && !improved; ++j) {
      for (double sign : {1.0, -1.0}) {
        Vector v = best.direction + sign * h * q.col(j);
        v /= v.norm();
        const double val = f(v);
        if (val > best.value) {
          best = {v, val};
          improved = true;
          break;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  return best;
}

SupReport sphere_sup(int d, NormTag tag, const SamplerConfig& cfg,
                     const std::function<double(const Vector&)>& f, Shape shape) {
  SupReport rep;
  rep.lower = -std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& u, bool record) {
    const double v = f(u);
    if (record) rep.rows.push_back({u, v});
    if (v > rep.lower) {
      rep.lower = v;
      rep.argmax = u;
    }
    return v;
  };

  for (const Vector& u : sphere_directions(d, tag, cfg)) {
    if (std::isinf(consider(u, true))) {
      rep.upper = rep.lower;
      return rep;
    }
  }

  if (tag != NormTag::L2 && shape != Shape::General) {
    // The maximum of a convex function over a polytope sits at a vertex.
    double vmax = -std::numeric_limits<double>::infinity();
    for (const Vector& u : ball_vertices(d, tag)) {
      const double v = consider(u, true);
      if (std::isinf(v)) {
        rep.upper = rep.lower;
        return rep;
      }
      vmax = std::max(vmax, v);
    }
    rep.upper = std::max(vmax, rep.lower);
    rep.certified = true;
    return rep;
  }

  if (tag == NormTag::L2 && cfg.refine && d >= 2) {
    std::vector<std::size_t> order(rep.rows.size());
    std::iota(order.begin(), order.end(), 0);
    const auto starts = std::min<std::size_t>(static_cast<std::size_t>(cfg.refine_starts), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                      [&](std::size_t a, std::size_t b) { return rep.rows[a].value > rep.rows[b].value; });
    for (std::size_t k = 0; k < starts; ++k) {
      const auto& row = rep.rows[order[k]];
      const DirectionValue r = refine_on_sphere(f, row.direction, row.value);
      if (r.value > rep.lower) {
        rep.lower = r.value;
        rep.argmax = r.direction;
      }
    }
  }
  rep.upper = rep.lower;

  if (tag == NormTag::L2 && d == 2 && shape == Shape::Sublinear && cfg.polygon_sides >= 8) {
    // The unit disk sits inside the regular polygon with vertices at radius
    // 1/cos(pi/N); a sublinear f is bounded on the disk by its vertex values.
    const int N = cfg.polygon_sides;
    const double pi = std::acos(-1.0);
    double best = -std::numeric_limits<double>::infinity();
    Vector at;
    for (int k = 0; k < N; ++k) {
      const double t = 2.0 * pi * (k + 0.5) / N;
      Vector u(2);
      u << std::cos(t), std::sin(t);
      const double v = f(u);
      if (v > best) {
        best = v;
        at = u;
      }
    }
    if (best > rep.lower) {
      rep.lower = best;
      rep.argmax = at;
    }
    rep.upper = std::max(rep.lower, best / std::cos(pi / N));
    rep.certified = true;
  }
  return rep;
}

}  // namespace conelift
