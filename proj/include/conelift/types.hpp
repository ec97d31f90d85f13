#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace conelift {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Norm used on a finite-dimensional real space.
enum class NormTag { L1, L2, Linf };

std::string_view to_string(NormTag tag);
NormTag parse_norm_tag(std::string_view name);

double norm(NormTag tag, const Vector& x);

/// Thrown when vector/matrix shapes disagree with the declared ambient spaces.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown in strict mode when a point lies outside the domain cone.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when an operation is asked for a cone variant it does not support.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown when an optimization did not reach a verdict within its limits.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double feasibility = 1e-9;
  double optimality_gap = 1e-8;
  double membership = 1e-9;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace conelift
