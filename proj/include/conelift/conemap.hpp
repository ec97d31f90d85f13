#pragma once

#include <string>
#include <vector>

#include "conelift/cones.hpp"
#include "conelift/sampling.hpp"
#include "conelift/solver.hpp"

namespace conelift {

/// Linear map T restricted to a cone C ⊆ Y, with norms on Y and X.
class ConeMap {
 public:
  ConeMap(Matrix matrix, Cone cone, NormTag domain_norm, NormTag codomain_norm);

  /// T(c_1, ..., c_k) = c_1 + ... + c_k on the l1-direct sum of the cones.
  static ConeMap summing(std::vector<Cone> cones, NormTag component_norm, NormTag codomain_norm);

  const Matrix& matrix() const { return matrix_; }
  const Cone& cone() const { return cone_; }
  NormTag domain_norm() const { return domain_norm_; }
  NormTag codomain_norm() const { return codomain_norm_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  int domain_dim() const { return static_cast<int>(matrix_.cols()); }

  double norm_in_domain(const Vector& c) const;
  double norm_in_codomain(const Vector& x) const;
  /// The domain norm as a solver expression (sum of block norms).
  NormExpr domain_norm_expr() const;
  MinNormProblem preimage_problem(const Vector& x) const;

 private:
  Matrix matrix_;
  Cone cone_;
  NormTag domain_norm_;
  NormTag codomain_norm_;
};

/// T c. In strict mode c must lie in the domain cone (DomainError otherwise).
Vector apply(const ConeMap& map, const Vector& c, bool strict = true);

/// Options for the many small solves behind the sphere sweeps: ties need not
/// be broken there, only values matter.
SolverOptions sweep_options();

struct Preimage {
  SolveStatus status = SolveStatus::IterationLimit;
  Vector point;
  double value = 0.0;
  Vector certificate;
  bool feasible() const { return status == SolveStatus::Optimal; }
};

/// Smallest-norm c ∈ C with T c = x; value is m(x).
Preimage min_preimage(const ConeMap& map, const Vector& x, const SolverOptions& opts = {});

/// m(x), +infinity when x ∉ T(C). Throws SolverError when undecided.
double min_preimage_value(const ConeMap& map, const Vector& x,
                          const SolverOptions& opts = sweep_options());

enum class VerdictMode { Exact, Sampled };
std::string_view to_string(VerdictMode m);

struct SurjectivityReport {
  bool surjective = false;
  VerdictMode mode = VerdictMode::Exact;
  /// Unit direction outside T(C) when not surjective.
  Vector witness;
  /// Nonzero y with <y, T c> >= 0 on C when not surjective.
  Vector certificate;
};

/// Exact dual test for polyhedral cones; otherwise checks ± basis vectors and
/// random directions and reports a sampled verdict.
SurjectivityReport is_surjective(const ConeMap& map, const SamplerConfig& cfg = {});

struct OpennessReport {
  bool finite = false;
  /// Bracket for K = sup of m over the unit sphere of X.
  double lower = 0.0;
  double upper = 0.0;
  bool certified = false;
  Vector worst_direction;
  Vector witness;
  std::vector<DirectionValue> rows;
};

OpennessReport openness_constant(const ConeMap& map, const SamplerConfig& cfg = {});

struct RadiusReport {
  /// Largest r found with r·x ∈ T(C ∩ B_Y) for every probed unit x.
  double radius = 0.0;
  Vector worst_direction;
  Vector witness;
};

/// Bisection on r with feasibility checks, independent of openness_constant.
RadiusReport interior_radius(const ConeMap& map, const SamplerConfig& cfg = {},
                             double rel_tol = 1e-10);

struct OperatorBound {
  double lower = 0.0;
  double upper = 0.0;
  bool certified = false;
  Vector direction;
};

/// M = sup{‖T c‖ : c ∈ C, ‖c‖_Y <= 1}, via the support function of T(C ∩ B_Y)
/// over the dual unit sphere.
OperatorBound operator_bound(const ConeMap& map, const SamplerConfig& cfg = {});

/// Minkowski functional of V = T(B) ∩ (−T(B)): max(m(x), m(−x)).
class GaugeNorm {
 public:
  explicit GaugeNorm(ConeMap map, SolverOptions opts = sweep_options());
  /// Also sweeps the sphere once for the equivalence constants.
  GaugeNorm(ConeMap map, const SamplerConfig& cfg, SolverOptions opts = sweep_options());

  /// Throws InfeasibleError when x or −x is outside T(C).
  double operator()(const Vector& x) const;
  const ConeMap& map() const { return map_; }

  /// ‖x‖_V <= K ‖x‖ and ‖x‖ <= M ‖x‖_V (upper ends of the computed brackets);
  /// zero unless built with a sampler.
  double upper_constant() const { return k_; }
  double lower_constant() const { return m_; }

 private:
  ConeMap map_;
  SolverOptions opts_;
  double k_ = 0.0;
  double m_ = 0.0;
};

}  // namespace conelift
