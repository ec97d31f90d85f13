#include "conelift/ordered.hpp"

#include <cmath>
#include <limits>

namespace conelift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix block_selector(int d, int block, double sign) {
  Matrix R = Matrix::Zero(d, 2 * d);
  R.middleCols(block * d, d) = sign * Matrix::Identity(d, d);
  return R;
}

Objective kind_objective(const OrderedSpace& space, const ConeMap& map, ConormalityKind kind) {
  switch (kind) {
    case ConormalityKind::Plain:
      return Objective::of_norm(NormExpr::seminorm(block_selector(space.dim(), 0, 1.0), space.norm));
    case ConormalityKind::Max:
      return Objective::max_block(map.domain_norm_expr());
    case ConormalityKind::Sum:
      break;
  }
  return Objective::of_norm(map.domain_norm_expr());
}

void require_generating(const ConeMap& map, const SamplerConfig& cfg) {
  const SurjectivityReport sj = is_surjective(map, cfg);
  if (!sj.surjective) throw NotGeneratingError("positive cone is not generating", sj.witness);
}

SamplerConfig probe_config() {
  SamplerConfig cfg;
  cfg.samples = 64;
  return cfg;
}

AndoDecomposition split(const Vector& c, const Vector& x) {
  const Eigen::Index d = x.size();
  return {c.head(d), -c.tail(d), x};
}

}  // namespace

OrderedSpace::OrderedSpace(Cone cone, NormTag tag) : positive_cone(std::move(cone)), norm(tag) {}

ConeMap OrderedSpace::summing_map() const {
  return ConeMap::summing({positive_cone, Cone::negation(positive_cone)}, norm, norm);
}

Functional OrderedSpace::plus_norm() const {
  return Functional::norm(NormExpr::seminorm(block_selector(dim(), 0, 1.0), norm));
}

Functional OrderedSpace::minus_norm() const {
  return Functional::norm(NormExpr::seminorm(block_selector(dim(), 1, -1.0), norm));
}

AndoDecomposer::AndoDecomposer(OrderedSpace space, const SamplerConfig& cfg)
    : space_(std::move(space)), gamma_(space_.summing_map()) {
  require_generating(gamma_.map(), cfg);
  k_ = selection_bound(gamma_, cfg).upper * (1.0 + 1e-6);
}

AndoDecomposition AndoDecomposer::operator()(const Vector& x) const {
  require_dim(x.size(), space_.dim(), "ando decomposition");
  return split(gamma_(x), x);
}

AndoDecomposition ando_decompose(const OrderedSpace& space, const Vector& x) {
  require_dim(x.size(), space.dim(), "ando decomposition");
  const ConeMap map = space.summing_map();
  require_generating(map, probe_config());
  return split(RightInverse(map)(x), x);
}

std::string_view to_string(ConormalityKind k) {
  switch (k) {
    case ConormalityKind::Plain:
      return "plain";
    case ConormalityKind::Max:
      return "max";
    case ConormalityKind::Sum:
      break;
  }
  return "sum";
}

double conormality_value(const OrderedSpace& space, ConormalityKind kind, const Vector& x) {
  require_dim(x.size(), space.dim(), "conormality value");
  const ConeMap map = space.summing_map();
  const MinNormProblem p{map.matrix(), x, map.cone(), kind_objective(space, map, kind), {}};
  const Solution s = solve_min_norm(p, sweep_options());
  if (s.status == SolveStatus::Infeasible) return kInf;
  if (!s.optimal()) throw SolverError("conormality value: solver did not converge");
  return s.value;
}

ConormalityReport conormality_constant(const OrderedSpace& space, ConormalityKind kind,
                                       const SamplerConfig& cfg) {
  ConormalityReport rep;
  const ConeMap map = space.summing_map();
  const SurjectivityReport sj = is_surjective(map, cfg);
  if (!sj.surjective) {
    rep.alpha = rep.upper = kInf;
    rep.witness = rep.worst_direction = sj.witness;
    return rep;
  }
  const SupReport sup = sphere_sup(
      space.dim(), space.norm, cfg, [&](const Vector& x) { return conormality_value(space, kind, x); },
      Shape::Sublinear);
  rep.finite = std::isfinite(sup.lower);
  rep.alpha = sup.lower;
  rep.upper = sup.upper;
  rep.certified = sup.certified;
  rep.worst_direction = sup.argmax;
  rep.rows = sup.rows;
  if (!rep.finite) rep.witness = sup.argmax;
  return rep;
}

std::vector<ContinuousConormalityRow> verify_continuous_conormality(
    const OrderedSpace& space, double alpha, const std::vector<double>& epsilons,
    const SamplerConfig& cfg) {
  const ConeMap map = space.summing_map();
  const Functional plus = space.plus_norm();
  std::vector<Vector> dirs = sphere_directions(space.dim(), space.norm, cfg);
  for (Vector& v : ball_vertices(space.dim(), space.norm)) dirs.push_back(std::move(v));

  std::vector<ContinuousConormalityRow> out;
  for (double eps : epsilons) {
    const std::vector<RhoBound> constraints{
        {Functional::norm(map.domain_norm_expr()), 2.0 * alpha + 1.0}, {plus, alpha}};
    const RightInverse gamma(map, constraints, eps);
    ContinuousConormalityRow row;
    row.epsilon = eps;
    row.pass = true;
    double worst_missing = -1.0;
    for (const Vector& x : dirs) {
      Vector c;
      try {
        c = gamma(x);
      } catch (const InfeasibleError&) {
        row.pass = false;
        const double need = conormality_value(space, ConormalityKind::Plain, x);
        if (need > worst_missing) {
          worst_missing = need;
          row.witness = x;
        }
        continue;
      }
      ++row.samples;
      const AndoDecomposition dec = split(c, x);
      const double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
      const double residual = (dec.plus - dec.minus - x).lpNorm<Eigen::Infinity>() / scale;
      const double ratio = norm(space.norm, dec.plus) / norm(space.norm, x);
      row.worst_residual = std::max(row.worst_residual, residual);
      if (ratio > row.worst_ratio) {
        row.worst_ratio = ratio;
        row.worst_direction = x;
      }
      if (residual > 1e-8 || !contains(space.positive_cone, dec.plus, 1e-8) ||
          !contains(space.positive_cone, dec.minus, 1e-8) || ratio > (alpha + eps) * (1.0 + 1e-8)) {
        row.pass = false;
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace conelift
