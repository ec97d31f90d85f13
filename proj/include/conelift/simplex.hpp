#pragma once

#include <vector>

#include "conelift/program.hpp"
#include "conelift/types.hpp"

namespace conelift::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

/// Result of a standard-form solve: minimize c'x subject to Ax = b, x >= 0.
struct StandardResult {
  Status status = Status::IterationLimit;
  Vector x;
  /// Equality multipliers on Optimal; on Infeasible a Farkas vector y with
  /// A'y <= 0 and b'y > 0.
  Vector y;
  double value = 0.0;
  long iterations = 0;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  /// 0 selects 10 * (rows + cols)^2.
  long max_iterations = 0;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
StandardResult solve_standard(const Matrix& A, const Vector& b, const Vector& c,
                              const SimplexOptions& opts = {});

/// Result for a ConicProgram without second-order blocks or quadratic term.
struct Result {
  Status status = Status::IterationLimit;
  Vector x;
  double value = 0.0;
  /// On Infeasible: (y_eq, y_cone) with A'y_eq + G'y_cone = 0, y_cone <= 0 and
  /// b'y_eq + h'y_cone > 0.
  Vector farkas_eq;
  Vector farkas_cone;
  long iterations = 0;
};

Result solve(const ConicProgram& prog, const SimplexOptions& opts = {});

/// Among optimal solutions, returns the one minimizing coordinates `order[0]`,
/// then `order[1]`, ... in turn. The objective is kept within `slack` (relative)
/// of its optimum; coordinate stages are pinned at their minima.
Result solve_lexicographic(const ConicProgram& prog, const std::vector<int>& order,
                           double slack = 1e-9, const SimplexOptions& opts = {});

}  // namespace conelift::lp
