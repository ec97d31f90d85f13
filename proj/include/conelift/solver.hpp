#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include "conelift/cones.hpp"
#include "conelift/ipm.hpp"
#include "conelift/simplex.hpp"
#include "conelift/types.hpp"

namespace conelift {

/// Sum of block seminorms  sum_b ||R_b c||_tag.
struct NormExpr {
  NormTag tag = NormTag::L2;
  std::vector<Matrix> blocks;

  /// Norm of the l1-direct sum with the given component sizes.
  static NormExpr direct_sum(NormTag tag, const std::vector<int>& sizes);
  static NormExpr whole(NormTag tag, int dim) { return direct_sum(tag, {dim}); }
  static NormExpr seminorm(Matrix R, NormTag tag);

  int dim() const;
  double evaluate(const Vector& c) const;
  double max_block(const Vector& c) const;
  bool is_polyhedral() const { return tag != NormTag::L2; }
};

/// Convex functional rho on R^m: a seminorm sum or a linear functional <w, c>.
struct Functional {
  std::variant<NormExpr, Vector> expr;

  static Functional norm(NormExpr e) { return Functional{std::move(e)}; }
  static Functional linear(Vector w) { return Functional{std::move(w)}; }
  double evaluate(const Vector& c) const;
  bool is_polyhedral() const;
};

struct Bound {
  Functional functional;
  double upper = 0.0;
};

struct Objective {
  enum class Kind { Norm, MaxBlock, SquaredEuclidean, Linear };
  Kind kind = Kind::Norm;
  NormExpr norm;    // Norm, MaxBlock
  Vector center;    // SquaredEuclidean: minimize 1/2 ||c - center||^2 (empty = 0)
  Vector linear;    // Linear

  static Objective of_norm(NormExpr e) { return {Kind::Norm, std::move(e), {}, {}}; }
  static Objective max_block(NormExpr e) { return {Kind::MaxBlock, std::move(e), {}, {}}; }
  static Objective euclidean(Vector center = {}) {
    return {Kind::SquaredEuclidean, {}, std::move(center), {}};
  }
  static Objective linear_functional(Vector w) { return {Kind::Linear, {}, {}, std::move(w)}; }

  /// Reported value: the norm (not its square) for SquaredEuclidean.
  double evaluate(const Vector& c) const;
};

/// min objective(c) subject to T c = target, c in cone, bounds.
struct MinNormProblem {
  Matrix equality_matrix;
  Vector target;
  Cone cone;
  Objective objective;
  std::vector<Bound> bounds;

  /// Norm objective following the cone's direct-sum structure.
  static MinNormProblem with_norm(Matrix T, Vector x, Cone cone, NormTag tag);
  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, IterationLimit };
std::string_view to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::IterationLimit;
  Vector point;
  double value = 0.0;
  double equality_residual = 0.0;
  double cone_violation = 0.0;
  /// On Infeasible: y with y'target > 0 and T'y in dual(-C) (bounds absent),
  /// or the target-space part of the certificate otherwise.
  Vector certificate;
  bool optimal() const { return status == SolveStatus::Optimal; }
};

struct SolverOptions {
  Tolerances tol;
  /// Break ties among L1/Linf minimizers by the lexicographically smallest point.
  bool lexicographic = true;
  ipm::Options ipm;
  lp::SimplexOptions simplex;
};

Solution solve_min_norm(const MinNormProblem& problem, const SolverOptions& opts = {});

struct Feasibility {
  bool feasible = false;
  /// Exact (simplex) decision or a residual-based one.
  bool exact = false;
  double residual = 0.0;
  Vector certificate;
};

/// Decides x ∈ T(C ∩ bounds); infeasible answers carry a Farkas-type vector.
Feasibility check_feasible(const Cone& cone, const Matrix& T, const Vector& x,
                           const std::vector<Bound>& bounds = {}, const SolverOptions& opts = {});

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, Vector certificate)
      : std::runtime_error(what), certificate_(std::move(certificate)) {}
  const Vector& certificate() const { return certificate_; }

 private:
  Vector certificate_;
};

/// Euclidean projection of z onto {c ∈ C : T c = x, bounds}. Throws InfeasibleError
/// when that set is empty.
Vector project_onto_slice(const Cone& cone, const Matrix& T, const Vector& x, const Vector& z,
                          const std::vector<Bound>& bounds = {}, const SolverOptions& opts = {});

}  // namespace conelift
