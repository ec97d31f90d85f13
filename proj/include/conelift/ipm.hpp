#pragma once

#include "conelift/program.hpp"

namespace conelift::ipm {

enum class Status { Optimal, IterationLimit, NumericalFailure };

struct Options {
  double feasibility_tolerance = 1e-10;
  double absolute_gap = 1e-12;
  double relative_gap = 1e-11;
  int max_iterations = 120;
  double step_fraction = 0.99;
  double regularization = 1e-12;
  int refinement_steps = 3;
};

struct Result {
  Status status = Status::IterationLimit;
  Vector x;
  Vector y;  // equality multipliers
  Vector s;
  Vector z;  // cone multipliers
  double primal_objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

/// Primal-dual path-following method with Nesterov-Todd scaling and
/// Mehrotra correction for ConicProgram instances. Assumes a solution
/// exists; infeasible or unbounded input ends in IterationLimit.
Result solve(const ConicProgram& prog, const Options& opts = {});

namespace cone_ops {

/// Jordan product for the cone R+^l x SOC(k_1) x ... (scalar first in each block).
Vector product(const Vector& u, const Vector& v, int orthant_rows, const std::vector<int>& soc);
/// Solves u o x = r for x (u in the interior).
Vector inverse_product(const Vector& u, const Vector& r, int orthant_rows,
                       const std::vector<int>& soc);
/// Largest step t with u + t*d in the cone (infinity if unbounded); u interior.
double max_step(const Vector& u, const Vector& d, int orthant_rows, const std::vector<int>& soc);
Vector identity(int orthant_rows, const std::vector<int>& soc);
/// True when u lies in the interior of the product cone.
bool interior(const Vector& u, int orthant_rows, const std::vector<int>& soc);

/// Nesterov-Todd scaling W (symmetric) with W z = W^{-1} s.
class Scaling {
 public:
  Scaling(const Vector& s, const Vector& z, int orthant_rows, const std::vector<int>& soc);
  Vector apply(const Vector& v) const;
  Vector apply_inverse(const Vector& v) const;
  /// Dense W^2.
  Matrix squared() const;

 private:
  int l_;
  std::vector<int> soc_;
  Vector d_;
  std::vector<double> beta_;
  std::vector<Vector> w_;
};

}  // namespace cone_ops

}  // namespace conelift::ipm
