#include "conelift/funclift.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace conelift {

namespace {

constexpr double kTol = 1e-8;

double inf_norm(const Vector& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

void note(PropertyCheck& c, double violation, const std::string& label) {
  if (violation > 0.0) c.pass = false;
  if (violation > c.worst) {
    c.worst = violation;
    c.worst_label = label;
  }
}

// min ‖c⁻‖ subject to a decomposition of x with ‖c⁺‖ <= a.
double minus_given_plus(const OrderedSpace& space, const ConeMap& map, const Vector& x, double a) {
  const MinNormProblem p{map.matrix(), x, map.cone(),
                         Objective::of_norm(std::get<NormExpr>(space.minus_norm().expr)),
                         {{space.plus_norm(), a}}};
  const Solution s = solve_min_norm(p, sweep_options());
  if (s.status == SolveStatus::Infeasible) return std::numeric_limits<double>::infinity();
  if (!s.optimal()) throw SolverError("function_space_conormality: solver did not converge");
  return s.value;
}

// min over A of A + max_ω min{‖c⁻(ω)‖ : ‖c⁺(ω)‖ <= A}; convex in A.
double sum_objective(const OrderedSpace& space, const std::vector<Vector>& points) {
  const ConeMap map = space.summing_map();
  double lo = 0.0;
  double hi = 0.0;
  for (const Vector& x : points) {
    lo = std::max(lo, conormality_value(space, ConormalityKind::Plain, x));
    hi = std::max(hi, conormality_value(space, ConormalityKind::Sum, x));
  }
  // Exactly at the plain requirement the ‖c⁺‖ ball only touches the slice,
  // which the interior-point solver handles poorly.
  lo = lo * (1.0 + 1e-6) + 1e-12;
  hi = std::max(hi, lo);
  auto h = [&](double a) {
    double g = 0.0;
    for (const Vector& x : points) g = std::max(g, minus_given_plus(space, map, x, a));
    return a + g;
  };
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double hc = h(c);
  double hd = h(d);
  double best = std::min({h(lo), h(hi), hc, hd});
  while (b - a > 1e-9 * std::max(1.0, hi)) {
    if (hc <= hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - ratio * (b - a);
      hc = h(c);
      best = std::min(best, hc);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + ratio * (b - a);
      hd = h(d);
      best = std::min(best, hd);
    }
  }
  return best;
}

}  // namespace

int SampledSpace::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels[static_cast<std::size_t>(i)] == label) return i;
  }
  throw DomainError("sampled space: unknown point '" + label + "'");
}

void SampledSpace::validate() const {
  if (tail.size() != labels.size()) throw DomainError("sampled space: tail flags do not match points");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw DomainError("sampled space: duplicate label '" + l + "'");
  }
}

void SampledFunction::validate() const {
  space.validate();
  if (values.size() != space.labels.size()) {
    throw DomainError("sampled function: one value per point is required");
  }
  for (const Vector& v : values) require_dim(v.size(), dim(), "sampled function value");
}

double SampledFunction::sup_norm(NormTag tag) const {
  double best = 0.0;
  for (const Vector& v : values) best = std::max(best, norm(tag, v));
  return best;
}

SampledFunction tensor(const SampledSpace& space, const Vector& phi, const Vector& x) {
  require_dim(phi.size(), space.size(), "tensor profile");
  SampledFunction f{space, {}};
  for (Eigen::Index i = 0; i < phi.size(); ++i) f.values.push_back(phi(i) * x);
  return f;
}

int Decomposer::components() const { return gamma.map().domain_dim() / gamma.map().dim(); }

std::vector<Vector> Decomposer::split(const Vector& x) const {
  const Vector c = gamma(x);
  const int d = gamma.map().dim();
  std::vector<Vector> out;
  for (int i = 0; i < components(); ++i) out.push_back(c.segment(i * d, d));
  return out;
}

Decomposer make_decomposer(std::vector<Cone> cones, NormTag tag, const SamplerConfig& cfg) {
  ConeMap map = ConeMap::summing(std::move(cones), tag, tag);
  const SurjectivityReport sj = is_surjective(map, cfg);
  if (!sj.surjective) throw NotGeneratingError("cones do not generate the space", sj.witness);
  RightInverse gamma(std::move(map));
  const double k = selection_bound(gamma, cfg).upper * (1.0 + 1e-6);
  return {std::move(gamma), k};
}

bool LiftResult::pass() const {
  if (!feasible) return false;
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

LiftResult lift(const SampledFunction& f, const Decomposer& dec) {
  f.validate();
  const ConeMap& map = dec.gamma.map();
  require_dim(f.dim(), map.dim(), "lift");
  const NormTag tag = map.codomain_norm();
  const NormTag ctag = map.domain_norm();
  const auto k = static_cast<std::size_t>(dec.components());
  const double K = dec.bound;
  const std::size_t n = f.values.size();
  const auto& labels = f.space.labels;

  LiftResult out;
  out.components.assign(k, SampledFunction{f.space, {}});
  for (std::size_t w = 0; w < n; ++w) {
    std::vector<Vector> parts;
    try {
      parts = dec.split(f.values[w]);
    } catch (const InfeasibleError& e) {
      out.feasible = false;
      out.failed_label = labels[w];
      out.certificate = e.certificate();
      out.components.clear();
      return out;
    }
    for (std::size_t i = 0; i < k; ++i) out.components[i].values.push_back(std::move(parts[i]));
  }
  auto value = [&](std::size_t i, std::size_t w) -> const Vector& { return out.components[i].values[w]; };

  PropertyCheck pointwise{"pointwise"}, sup{"sup_norm"}, support{"support"}, tail{"tail"},
      consistency{"consistency"};
  std::vector<double> csup(k, 0.0);
  std::vector<std::string> csup_label(k);
  for (std::size_t w = 0; w < n; ++w) {
    const Vector& x = f.values[w];
    const double nx = norm(tag, x);
    Vector total = Vector::Zero(x.size());
    double parts_norm = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      total += value(i, w);
      const double ni = norm(ctag, value(i, w));
      parts_norm += ni;
      if (ni > csup[i]) {
        csup[i] = ni;
        csup_label[i] = labels[w];
      }
      if (x.isZero(0.0)) note(support, inf_norm(value(i, w)), labels[w]);
      if (f.space.tail[w]) note(tail, ni - K * nx - kTol, labels[w]);
    }
    note(pointwise, inf_norm(total - x) - kTol * (1.0 + inf_norm(x)), labels[w]);
    note(pointwise, parts_norm - K * nx - kTol, labels[w]);
  }
  const double fsup = f.sup_norm(tag);
  for (std::size_t i = 0; i < k; ++i) note(sup, csup[i] - K * fsup - kTol, csup_label[i]);

  // λ₁ f(ω₁) = λ₂ f(ω₂) with λ's not both zero forces f(ω₂) = t f(ω₁), t > 0.
  std::vector<Vector> unit(n);
  std::vector<double> len(n);
  for (std::size_t w = 0; w < n; ++w) {
    len[w] = f.values[w].norm();
    if (len[w] > 0.0) unit[w] = f.values[w] / len[w];
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (len[a] == 0.0) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (len[b] == 0.0 || (unit[a] - unit[b]).norm() > 1e-14) continue;
      const double t = len[b] / len[a];
      for (std::size_t i = 0; i < k; ++i) {
        const double gap = (t * value(i, a) - value(i, b)).norm();
        note(consistency, gap - kTol * (1.0 + value(i, b).norm()), labels[b]);
      }
    }
  }
  out.checks = {pointwise, sup, support, tail, consistency};
  return out;
}

Recovered pointwise_recover(const std::vector<SampledFunction>& parts, const std::vector<Cone>& cones,
                            const std::string& label, double phi_value) {
  if (phi_value == 0.0) throw DomainError("pointwise_recover: the profile vanishes at the point");
  if (parts.empty() || parts.size() != cones.size()) {
    throw DimensionError("pointwise_recover: one cone per component is required");
  }
  Recovered r;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const int w = parts[i].space.index_of(label);
    Vector c = parts[i].values[static_cast<std::size_t>(w)] / phi_value;
    require_dim(c.size(), cones[i].ambient_dim(), "pointwise_recover component");
    if (r.bad_component < 0 && !contains(cones[i], c, kTol)) {
      r.valid = false;
      r.bad_component = static_cast<int>(i);
    }
    r.sum = r.sum.size() ? Vector(r.sum + c) : c;
    r.parts.push_back(std::move(c));
  }
  return r;
}

double function_space_conormality(const OrderedSpace& space,
                                  const std::vector<SampledFunction>& tests, ConormalityKind kind) {
  double best = 0.0;
  bool any = false;
  for (const auto& f : tests) {
    f.validate();
    require_dim(f.dim(), space.dim(), "function_space_conormality");
    const double fs = f.sup_norm(space.norm);
    if (fs == 0.0) continue;
    any = true;
    std::vector<Vector> points;
    for (const Vector& v : f.values) {
      if (!v.isZero(0.0)) points.push_back(v);
    }
    double value = 0.0;
    if (kind == ConormalityKind::Sum) {
      value = sum_objective(space, points);
    } else {
      // Plain and Max decouple over points: the sup of pointwise minima is attained.
      for (const Vector& x : points) value = std::max(value, conormality_value(space, kind, x));
    }
    best = std::max(best, value / fs);
  }
  if (!any) throw DomainError("function_space_conormality: needs a nonzero test function");
  return best;
}

}  // namespace conelift
