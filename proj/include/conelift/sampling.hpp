#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "conelift/types.hpp"

namespace conelift {

struct SamplerConfig {
  /// Number of uniform random directions added to the lattice directions.
  int samples = 4096;
  std::uint64_t seed = 1;
  /// Local maximization from the best samples (Euclidean spheres only).
  bool refine = true;
  int refine_starts = 4;
  /// Sides of the circumscribed polygon used for planar upper bounds.
  int polygon_sides = 2048;
};

/// Normalized primitive lattice points of a small cube, then `samples`
/// uniform random directions; all scaled to the unit sphere of `tag`.
std::vector<Vector> sphere_directions(int d, NormTag tag, const SamplerConfig& cfg);

/// Extreme points of the closed unit ball: ±e_i for L1, sign vectors for Linf,
/// empty for L2.
std::vector<Vector> ball_vertices(int d, NormTag tag);

struct DirectionValue {
  Vector direction;
  double value = 0.0;
};

/// Estimate of sup f over the unit sphere.
struct SupReport {
  double lower = 0.0;
  double upper = 0.0;
  /// True when `upper` is a proven bound rather than a copy of the estimate.
  bool certified = false;
  Vector argmax;
  std::vector<DirectionValue> rows;
};

enum class Shape {
  /// Positively homogeneous and convex: the sup over the ball is attained at
  /// extreme points and polygon vertices bound it from above.
  Sublinear,
  /// Convex on the ball; extreme points are exact, no scaling argument.
  Convex,
  General,
};

/// f may return +infinity; the report then carries upper = lower = +infinity
/// and argmax at the first such direction.
SupReport sphere_sup(int d, NormTag tag, const SamplerConfig& cfg,
                     const std::function<double(const Vector&)>& f, Shape shape);

/// Pattern search for a local maximum of f on the Euclidean sphere from `start`.
DirectionValue refine_on_sphere(const std::function<double(const Vector&)>& f, Vector start,
                                double start_value, double initial_step = 0.05,
                                double final_step = 1e-8);

}  // namespace conelift
