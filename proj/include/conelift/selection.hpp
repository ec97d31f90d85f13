#pragma once

#include <functional>
#include <vector>

#include "conelift/conemap.hpp"

namespace conelift {

/// ρ(c) <= α: a seminorm or linear functional with its bound.
struct RhoBound {
  Functional rho;
  double alpha = 0.0;
};

/// Continuous positively homogeneous right inverse of a surjective ConeMap:
/// γ(x) = argmin{ ½‖c‖₂² : T c = x, c ∈ C } and, in constrained mode, also
/// ρ_j(c) <= (α_j + ε)‖x‖.
class RightInverse {
 public:
  explicit RightInverse(ConeMap map, SolverOptions opts = {});
  RightInverse(ConeMap map, std::vector<RhoBound> constraints, double epsilon = 1e-3,
               SolverOptions opts = {});

  /// Throws InfeasibleError when x ∉ T(C) or the constraints empty the slice.
  Vector operator()(const Vector& x) const;

  const ConeMap& map() const { return map_; }
  bool constrained() const { return constrained_; }
  const std::vector<RhoBound>& constraints() const { return constraints_; }
  double epsilon() const { return epsilon_; }

 private:
  ConeMap map_;
  std::vector<RhoBound> constraints_;
  double epsilon_ = 0.0;
  bool constrained_ = false;
  SolverOptions opts_;
};

/// K₂ = sup over sampled unit directions of ‖γ(x)‖_Y.
SupReport selection_bound(const RightInverse& gamma, const SamplerConfig& cfg = {});

struct AlphaReport {
  bool feasible = true;
  double alpha = 0.0;
  double upper = 0.0;
  bool certified = false;
  Vector worst_direction;
  /// Direction where no c with ‖c‖_Y <= K exists (K too small).
  Vector witness;
};

/// sup over the unit sphere of min{ ρ(c) : T c = x, c ∈ C, ‖c‖_Y <= K }.
AlphaReport achievable_alpha(const ConeMap& map, const Functional& rho, double K,
                             const SamplerConfig& cfg = {});

/// x ↦ ‖x‖ σ(x/‖x‖) for a map σ given on the unit sphere of X.
class SphereExtension {
 public:
  /// Off-sample directions use the nearest tabulated direction.
  static SphereExtension from_table(NormTag tag, std::vector<Vector> directions,
                                    std::vector<Vector> values);
  /// σ evaluated exactly at x/‖x‖.
  static SphereExtension from_function(NormTag tag, std::function<Vector(const Vector&)> sigma,
                                       int value_dim);

  Vector operator()(const Vector& x) const;
  NormTag norm_tag() const { return tag_; }

 private:
  NormTag tag_ = NormTag::L2;
  std::vector<Vector> directions_;
  std::vector<Vector> values_;
  std::function<Vector(const Vector&)> sigma_;
  int value_dim_ = 0;
};

SphereExtension extend_from_sphere(NormTag tag, std::vector<Vector> directions,
                                   std::vector<Vector> values);

/// φ_ε(x) = { y ∈ C : T y = x, ρ_j(y) <= α_j + ε } on the unit sphere of X.
struct CorrespondenceSpec {
  ConeMap map;
  std::vector<RhoBound> constraints;
  double epsilon = 1e-3;

  std::vector<Bound> bounds() const;
};

struct CorrespondenceValue {
  bool nonempty = false;
  /// The describing system is {c ∈ C : T c = x} ∩ bounds.
  std::vector<Bound> bounds;
  /// Smallest Euclidean element when nonempty.
  Vector witness;
  Vector certificate;
};

/// Requires ‖x‖ = 1 in the codomain norm (DomainError otherwise).
CorrespondenceValue correspondence_value(const CorrespondenceSpec& cs, const Vector& x);

/// dist₂(y, φ_ε(x′)); +infinity when φ_ε(x′) is empty.
double hemicontinuity_probe(const CorrespondenceSpec& cs, const Vector& x, const Vector& x_prime,
                            const Vector& y);

struct ProbeStep {
  double theta = 0.0;
  double step = 0.0;  // ‖x − x′‖
  double distance = 0.0;
  double ratio = 0.0;
};

/// Runs the probe along x′_k = normalize(cos θ_k x + sin θ_k t), θ_k = 0.1·2^{−k},
/// k = 0..10, for the unit tangent-like direction t and y = smallest element of φ_ε(x).
std::vector<ProbeStep> hemicontinuity_sweep(const CorrespondenceSpec& cs, const Vector& x,
                                            const Vector& t);

struct LipschitzReport {
  double constant = 0.0;
  Vector u;
  Vector v;
  long pairs = 0;
};

/// ‖γ(u) − γ(v)‖_Y / ‖u − v‖_X for one pair.
double lipschitz_ratio(const RightInverse& gamma, const Vector& u, const Vector& v);

/// Max ratio over sampled unit-sphere pairs with ‖u − v‖ <= max_distance.
LipschitzReport lipschitz_estimate(const RightInverse& gamma, const SamplerConfig& cfg = {},
                                   double max_distance = 0.1);

}  // namespace conelift
