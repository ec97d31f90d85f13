#pragma once

#include <string_view>
#include <vector>

#include "conelift/selection.hpp"

namespace conelift {

/// R^d ordered by a closed cone X⁺ (not necessarily proper).
struct OrderedSpace {
  Cone positive_cone;
  NormTag norm = NormTag::L2;

  OrderedSpace(Cone positive_cone, NormTag norm);
  int dim() const { return positive_cone.ambient_dim(); }
  /// (c₁, c₂) ↦ c₁ + c₂ on X⁺ ⊕₁ (−X⁺).
  ConeMap summing_map() const;
  /// Plus part is the first block, minus part the negated second block.
  Functional plus_norm() const;
  Functional minus_norm() const;
};

/// X⁺ fails to span X; carries a unit direction outside X⁺ − X⁺.
class NotGeneratingError : public std::runtime_error {
 public:
  NotGeneratingError(const std::string& what, Vector witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const Vector& witness() const { return witness_; }

 private:
  Vector witness_;
};

struct AndoDecomposition {
  Vector plus;
  Vector minus;
  Vector source;
};

/// x = γ⁺(x) − γ⁻(x) with the minimal-Euclidean selection over the summing map.
class AndoDecomposer {
 public:
  /// Throws NotGeneratingError. K is the sampled bound on ‖γ⁺(x)‖ + ‖γ⁻(x)‖ over
  /// the unit sphere, with a 1e-6 relative margin.
  explicit AndoDecomposer(OrderedSpace space, const SamplerConfig& cfg = {});

  AndoDecomposition operator()(const Vector& x) const;
  const OrderedSpace& space() const { return space_; }
  const RightInverse& selection() const { return gamma_; }
  double bound() const { return k_; }

 private:
  OrderedSpace space_;
  RightInverse gamma_;
  double k_ = 0.0;
};

/// One decomposition; checks generation first (NotGeneratingError).
AndoDecomposition ando_decompose(const OrderedSpace& space, const Vector& x);

enum class ConormalityKind { Plain, Max, Sum };
std::string_view to_string(ConormalityKind k);

/// min over x = x⁺ − x⁻ of ‖x⁺‖, max(‖x⁺‖, ‖x⁻‖) or ‖x⁺‖ + ‖x⁻‖; +inf if none.
double conormality_value(const OrderedSpace& space, ConormalityKind kind, const Vector& x);

struct ConormalityReport {
  bool finite = false;
  /// α is the lower end of the bracket [lower, upper].
  double alpha = 0.0;
  double upper = 0.0;
  bool certified = false;
  Vector worst_direction;
  Vector witness;
  std::vector<DirectionValue> rows;
};

ConormalityReport conormality_constant(const OrderedSpace& space, ConormalityKind kind,
                                       const SamplerConfig& cfg = {});

struct ContinuousConormalityRow {
  double epsilon = 0.0;
  bool pass = false;
  int samples = 0;
  /// max ‖γ⁺(x)‖ / ‖x‖ over the samples that were decomposed.
  double worst_ratio = 0.0;
  double worst_residual = 0.0;
  Vector worst_direction;
  /// Unit direction where no admissible decomposition exists.
  Vector witness;
};

/// For each ε builds continuous positively homogeneous γ±_ε with
/// ‖γ⁺_ε(x)‖ <= (α + ε)‖x‖ and checks x = γ⁺ − γ⁻, γ± ∈ X⁺ and the bound
/// on sampled unit directions.
std::vector<ContinuousConormalityRow> verify_continuous_conormality(
    const OrderedSpace& space, double alpha, const std::vector<double>& epsilons,
    const SamplerConfig& cfg = {});

}  // namespace conelift
