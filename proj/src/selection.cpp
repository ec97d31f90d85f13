#include "conelift/selection.hpp"

#include <cmath>
#include <limits>

namespace conelift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Objective objective_for(const Functional& rho) {
  if (const auto* e = std::get_if<NormExpr>(&rho.expr)) return Objective::of_norm(*e);
  return Objective::linear_functional(std::get<Vector>(rho.expr));
}

void require_unit(const ConeMap& map, const Vector& x, const char* what) {
  require_dim(x.size(), map.dim(), what);
  if (std::abs(map.norm_in_codomain(x) - 1.0) > 1e-8) {
    throw DomainError(std::string(what) + ": point must lie on the unit sphere");
  }
}

}  // namespace

RightInverse::RightInverse(ConeMap map, SolverOptions opts) : map_(std::move(map)), opts_(opts) {}

RightInverse::RightInverse(ConeMap map, std::vector<RhoBound> constraints, double epsilon,
                           SolverOptions opts)
    : map_(std::move(map)),
      constraints_(std::move(constraints)),
      epsilon_(epsilon),
      constrained_(true),
      opts_(opts) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("RightInverse: epsilon must be positive");
}

Vector RightInverse::operator()(const Vector& x) const {
  require_dim(x.size(), map_.dim(), "right inverse");
  if (x.isZero(0.0)) return Vector::Zero(map_.domain_dim());
  std::vector<Bound> bounds;
  if (constrained_) {
    const double scale = map_.norm_in_codomain(x);
    for (const auto& c : constraints_) bounds.push_back({c.rho, (c.alpha + epsilon_) * scale});
  }
  const MinNormProblem p{map_.matrix(), x, map_.cone(), Objective::euclidean(), std::move(bounds)};
  const Solution s = solve_min_norm(p, opts_);
  if (s.status == SolveStatus::Infeasible) {
    throw InfeasibleError("right inverse: no admissible preimage", s.certificate);
  }
  if (!s.optimal()) throw SolverError("right inverse: solver did not converge");
  return s.point;
}

SupReport selection_bound(const RightInverse& gamma, const SamplerConfig& cfg) {
  const ConeMap& map = gamma.map();
  return sphere_sup(
      map.dim(), map.codomain_norm(), cfg,
      [&](const Vector& u) { return map.norm_in_domain(gamma(u)); }, Shape::General);
}

AlphaReport achievable_alpha(const ConeMap& map, const Functional& rho, double K,
                             const SamplerConfig& cfg) {
  const std::vector<Bound> ball{{Functional::norm(map.domain_norm_expr()), K * (1.0 + 1e-9)}};
  const Objective obj = objective_for(rho);
  const SolverOptions opts = sweep_options();
  auto f = [&](const Vector& u) {
    const MinNormProblem p{map.matrix(), u, map.cone(), obj, ball};
    const Solution s = solve_min_norm(p, opts);
    if (s.status == SolveStatus::Infeasible) return kInf;
    if (!s.optimal()) throw SolverError("achievable_alpha: solver did not converge");
    return s.value;
  };
  const SupReport sup = sphere_sup(map.dim(), map.codomain_norm(), cfg, f, Shape::Convex);
  AlphaReport rep;
  rep.worst_direction = sup.argmax;
  if (std::isinf(sup.lower)) {
    rep.feasible = false;
    rep.alpha = rep.upper = kInf;
    rep.witness = sup.argmax;
    return rep;
  }
  rep.alpha = sup.lower;
  rep.upper = sup.upper;
  rep.certified = sup.certified;
  return rep;
}

SphereExtension SphereExtension::from_table(NormTag tag, std::vector<Vector> directions,
                                            std::vector<Vector> values) {
  if (directions.empty() || directions.size() != values.size()) {
    throw DimensionError("sphere table: need matching, non-empty direction and value lists");
  }
  SphereExtension e;
  e.tag_ = tag;
  e.value_dim_ = static_cast<int>(values.front().size());
  for (std::size_t i = 0; i < directions.size(); ++i) {
    require_dim(directions[i].size(), directions.front().size(), "sphere table direction");
    require_dim(values[i].size(), e.value_dim_, "sphere table value");
    directions[i] /= norm(tag, directions[i]);
  }
  e.directions_ = std::move(directions);
  e.values_ = std::move(values);
  return e;
}

SphereExtension SphereExtension::from_function(NormTag tag,
                                               std::function<Vector(const Vector&)> sigma,
                                               int value_dim) {
  SphereExtension e;
  e.tag_ = tag;
  e.sigma_ = std::move(sigma);
  e.value_dim_ = value_dim;
  return e;
}

Vector SphereExtension::operator()(const Vector& x) const {
  const double r = norm(tag_, x);
  if (r == 0.0) return Vector::Zero(value_dim_);
  const Vector u = x / r;
  if (sigma_) return r * sigma_(u);
  require_dim(x.size(), directions_.front().size(), "sphere extension");
  std::size_t best = 0;
  double best_dist = kInf;
  for (std::size_t i = 0; i < directions_.size(); ++i) {
    const double dist = (directions_[i] - u).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return r * values_[best];
}

SphereExtension extend_from_sphere(NormTag tag, std::vector<Vector> directions,
                                   std::vector<Vector> values) {
  return SphereExtension::from_table(tag, std::move(directions), std::move(values));
}

std::vector<Bound> CorrespondenceSpec::bounds() const {
  std::vector<Bound> out;
  for (const auto& c : constraints) out.push_back({c.rho, c.alpha + epsilon});
  return out;
}

CorrespondenceValue correspondence_value(const CorrespondenceSpec& cs, const Vector& x) {
  require_unit(cs.map, x, "correspondence_value");
  CorrespondenceValue out;
  out.bounds = cs.bounds();
  const MinNormProblem p{cs.map.matrix(), x, cs.map.cone(), Objective::euclidean(), out.bounds};
  const Solution s = solve_min_norm(p);
  if (s.status == SolveStatus::Infeasible) {
    out.certificate = s.certificate;
    return out;
  }
  if (!s.optimal()) throw SolverError("correspondence_value: solver did not converge");
  out.nonempty = true;
  out.witness = s.point;
  return out;
}

double hemicontinuity_probe(const CorrespondenceSpec& cs, const Vector& x, const Vector& x_prime,
                            const Vector& y) {
  require_unit(cs.map, x, "hemicontinuity_probe");
  require_unit(cs.map, x_prime, "hemicontinuity_probe");
  require_dim(y.size(), cs.map.domain_dim(), "hemicontinuity_probe witness");
  try {
    const Vector p = project_onto_slice(cs.map.cone(), cs.map.matrix(), x_prime, y, cs.bounds());
    return (p - y).norm();
  } catch (const InfeasibleError&) {
    return kInf;
  }
}

std::vector<ProbeStep> hemicontinuity_sweep(const CorrespondenceSpec& cs, const Vector& x,
                                            const Vector& t) {
  const CorrespondenceValue base = correspondence_value(cs, x);
  std::vector<ProbeStep> out;
  for (int k = 0; k <= 10; ++k) {
    ProbeStep st;
    st.theta = 0.1 * std::ldexp(1.0, -k);
    Vector xp = std::cos(st.theta) * x + std::sin(st.theta) * t;
    xp /= cs.map.norm_in_codomain(xp);
    st.step = cs.map.norm_in_codomain(x - xp);
    st.distance = base.nonempty ? hemicontinuity_probe(cs, x, xp, base.witness) : kInf;
    st.ratio = st.step > 0.0 ? st.distance / st.step : 0.0;
    if (std::isinf(st.distance)) st.ratio = kInf;
    out.push_back(st);
  }
  return out;
}

double lipschitz_ratio(const RightInverse& gamma, const Vector& u, const Vector& v) {
  const ConeMap& map = gamma.map();
  const double du = map.norm_in_codomain(u - v);
  if (du == 0.0) return 0.0;
  return map.norm_in_domain(gamma(u) - gamma(v)) / du;
}

LipschitzReport lipschitz_estimate(const RightInverse& gamma, const SamplerConfig& cfg,
                                   double max_distance) {
  const ConeMap& map = gamma.map();
  const std::vector<Vector> dirs = sphere_directions(map.dim(), map.codomain_norm(), cfg);
  std::vector<Vector> values;
  values.reserve(dirs.size());
  for (const Vector& u : dirs) values.push_back(gamma(u));
  LipschitzReport rep;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      const double du = map.norm_in_codomain(dirs[i] - dirs[j]);
      if (du > max_distance || du < 1e-12) continue;
      ++rep.pairs;
      const double ratio = map.norm_in_domain(values[i] - values[j]) / du;
      if (ratio > rep.constant) {
        rep.constant = ratio;
        rep.u = dirs[i];
        rep.v = dirs[j];
      }
    }
  }
  return rep;
}

}  // namespace conelift
