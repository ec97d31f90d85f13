#pragma once

#include <string>
#include <vector>

#include "conelift/ordered.hpp"

namespace conelift {

/// Finite sample of a domain Ω; tail points stand in for "near infinity".
struct SampledSpace {
  std::vector<std::string> labels;
  std::vector<bool> tail;

  int size() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& label) const;
  /// Labels unique, tail flags aligned with labels (DomainError otherwise).
  void validate() const;
};

/// An X-valued function on a SampledSpace, one value per point.
struct SampledFunction {
  SampledSpace space;
  std::vector<Vector> values;

  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
  void validate() const;
  double sup_norm(NormTag tag) const;
};

/// (φ ⊗ x)(ω) = φ(ω) x.
SampledFunction tensor(const SampledSpace& space, const Vector& phi, const Vector& x);

/// γ = minimal-Euclidean right inverse of a summing map over cones C_1..C_k in X,
/// together with a bound K on Σ‖γ_i(x)‖ / ‖x‖.
struct Decomposer {
  RightInverse gamma;
  double bound = 0.0;

  int components() const;
  /// γ_i(x) for each i.
  std::vector<Vector> split(const Vector& x) const;
};

/// K from the sampled selection bound with a 1e-6 relative margin. Throws
/// NotGeneratingError when the summing map is not surjective.
Decomposer make_decomposer(std::vector<Cone> cones, NormTag tag, const SamplerConfig& cfg = {});

struct PropertyCheck {
  std::string name;
  bool pass = true;
  /// Largest violation (0 when none) and where it happened.
  double worst = 0.0;
  std::string worst_label;
};

struct LiftResult {
  bool feasible = true;
  /// Point where some γ_i could not be evaluated.
  std::string failed_label;
  Vector certificate;
  std::vector<SampledFunction> components;
  /// pointwise, sup_norm, support, tail, consistency.
  std::vector<PropertyCheck> checks;

  bool pass() const;
};

/// f_i = γ_i ∘ f, with the five property checks on the sample.
LiftResult lift(const SampledFunction& f, const Decomposer& dec);

struct Recovered {
  std::vector<Vector> parts;
  Vector sum;
  bool valid = true;
  /// Index of the first part outside its cone, -1 when all are members.
  int bad_component = -1;
};

/// c_i = F_i(ω₀)/φ(ω₀); membership of c_i in C_i is checked.
Recovered pointwise_recover(const std::vector<SampledFunction>& parts, const std::vector<Cone>& cones,
                            const std::string& label, double phi_value);

/// sup over test functions of the best decomposition objective in sup norms,
/// divided by ‖f‖∞. Zero functions are skipped; all-zero or empty input is a
/// DomainError.
double function_space_conormality(const OrderedSpace& space,
                                  const std::vector<SampledFunction>& tests, ConormalityKind kind);

}  // namespace conelift
