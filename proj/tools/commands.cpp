#include "commands.hpp"

#include <fstream>
#include <optional>
#include <ostream>

#include "instance.hpp"

namespace conelift::cli {

namespace {

Instance load(const Options& opt) {
  Instance inst = load_instance(opt.instance);
  if (opt.samples) inst.sampler.samples = *opt.samples;
  if (opt.seed) inst.sampler.seed = *opt.seed;
  if (opt.epsilon) inst.epsilon = *opt.epsilon;
  return inst;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError(path + ": cannot write file");
  return f;
}

std::string header(const std::string& prefix, int n) {
  std::string out;
  for (int i = 1; i <= n; ++i) {
    if (i > 1) out += ',';
    out += prefix + std::to_string(i);
  }
  return out;
}

void print_not_surjective(std::ostream& out, const SurjectivityReport& sj) {
  out << "surjective: no\n"
      << "mode: " << to_string(sj.mode) << "\n"
      << "witness: " << join(sj.witness) << "\n";
  if (sj.certificate.size()) out << "certificate: " << join(sj.certificate) << "\n";
}

void write_rows(const std::string& path, int dim, const std::vector<DirectionValue>& rows) {
  if (path.empty()) return;
  std::ofstream f = open_output(path);
  f << header("x", dim) << ",value\n";
  for (const auto& r : rows) f << join(r.direction) << ',' << fmt(r.value) << '\n';
}

void print_bracket(std::ostream& out, std::string_view kind, double lower, double upper,
                   bool certified, const Vector& worst) {
  out << "kind: " << kind << "\n"
      << "lower: " << fmt(lower) << "\n"
      << "upper: " << fmt(upper) << "\n"
      << "certified: " << (certified ? "yes" : "no") << "\n"
      << "worst_direction: " << join(worst) << "\n";
}

ConormalityKind parse_kind(const std::string& k) {
  if (k == "plain") return ConormalityKind::Plain;
  if (k == "max") return ConormalityKind::Max;
  if (k == "sum") return ConormalityKind::Sum;
  throw ParseError("--kind: expected openness, plain, max or sum");
}

// Component labels: plus/minus for an ordered space, c1..ck otherwise.
std::vector<std::string> component_names(const Instance& inst) {
  if (inst.ordered_cones && !inst.map) return {"plus", "minus"};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= inst.cones.size(); ++i) out.push_back("c" + std::to_string(i));
  return out;
}

// Entries at rounding level relative to the source point are printed as zero.
Vector clean(Vector v, double scale) {
  return (v.array().abs() <= 1e-12 * std::max(1.0, scale)).select(0.0, v);
}

// Splits a domain vector into per-cone blocks; the ordered minus part is negated.
std::vector<Vector> blocks(const Instance& inst, const Vector& point, double scale) {
  const Vector c = clean(point, scale);
  std::vector<Vector> out;
  Eigen::Index off = 0;
  for (const Cone& cone : inst.cones) {
    out.push_back(c.segment(off, cone.ambient_dim()));
    off += cone.ambient_dim();
  }
  if (component_names(inst).front() == "plus") out[1] = -out[1];
  return out;
}

int write_preimages(const Instance& inst, const ConeMap& map, const RightInverse& gamma,
                    const std::vector<Vector>& points, std::ostream& out) {
  const std::vector<std::string> names = component_names(inst);
  out << header("x", inst.dim);
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << ',' << header(names[i] + "_", inst.cones[i].ambient_dim());
  }
  for (const auto& n : names) out << ",norm_" << n;
  out << ",ratio,status\n";

  int failed = 0;
  for (const Vector& x : points) {
    out << join(x);
    Vector c;
    try {
      c = gamma(x);
    } catch (const InfeasibleError&) {
      ++failed;
      const std::size_t empty = static_cast<std::size_t>(map.domain_dim()) + names.size() + 1;
      out << std::string(empty, ',') << ",infeasible\n";
      continue;
    }
    double total = 0.0;
    std::string norms;
    for (const Vector& b : blocks(inst, c, x.lpNorm<Eigen::Infinity>())) {
      out << ',' << join(b);
      const double nb = norm(map.domain_norm(), b);
      total += nb;
      norms += ',' + fmt(nb);
    }
    const double nx = map.norm_in_codomain(x);
    out << norms << ',' << fmt(nx > 0.0 ? total / nx : 0.0) << ",ok\n";
  }
  return failed ? kFailedRows : kOk;
}

}  // namespace

int check_surjective(const Options& opt, std::ostream& out) {
  const Instance inst = load(opt);
  const SurjectivityReport sj = is_surjective(inst.cone_map(), inst.sampler);
  if (!sj.surjective) {
    print_not_surjective(out, sj);
    return kNotSurjective;
  }
  out << "surjective: yes\n"
      << "mode: " << to_string(sj.mode) << "\n";
  return kOk;
}

int constant(const Options& opt, std::ostream& out) {
  const Instance inst = load(opt);
  if (opt.kind == "openness") {
    const ConeMap map = inst.cone_map();
    const SurjectivityReport sj = is_surjective(map, inst.sampler);
    if (!sj.surjective) {
      print_not_surjective(out, sj);
      return kNotSurjective;
    }
    const OpennessReport r = openness_constant(map, inst.sampler);
    print_bracket(out, "openness", r.lower, r.upper, r.certified, r.worst_direction);
    write_rows(opt.report, inst.dim, r.rows);
    return kOk;
  }
  const ConormalityKind kind = parse_kind(opt.kind);
  const OrderedSpace space = inst.ordered_space();
  const ConormalityReport r = conormality_constant(space, kind, inst.sampler);
  if (!r.finite) {
    out << "surjective: no\n"
        << "witness: " << join(r.witness) << "\n";
    return kNotSurjective;
  }
  print_bracket(out, to_string(kind), r.alpha, r.upper, r.certified, r.worst_direction);
  write_rows(opt.report, inst.dim, r.rows);
  return kOk;
}

int decompose(const Options& opt, std::ostream& out) {
  const Instance inst = load(opt);
  const std::vector<Vector> points = read_points(opt.points, inst.dim);
  const ConeMap map = inst.cone_map();
  return write_preimages(inst, map, RightInverse(map), points, out);
}

int rightinv(const Options& opt, std::ostream& out) {
  const Instance inst = load(opt);
  const std::vector<Vector> points = read_points(opt.points, inst.dim);
  const ConeMap map = inst.cone_map();
  const RightInverse gamma = inst.constraints.empty()
                                 ? RightInverse(map)
                                 : RightInverse(map, inst.constraints, inst.epsilon);
  return write_preimages(inst, map, gamma, points, out);
}

int lift(const Options& opt, std::ostream& out) {
  const Instance inst = load(opt);
  if (inst.map) throw ParseError("lift: needs a summing-map instance (no explicit map)");
  const SampledFunction f = read_function(opt.function, inst.dim);
  std::optional<Decomposer> dec;
  try {
    dec.emplace(make_decomposer(inst.cones, inst.norm, inst.sampler));
  } catch (const NotGeneratingError& e) {
    out << "surjective: no\n"
        << "witness: " << join(e.witness()) << "\n";
    return kNotSurjective;
  }
  const LiftResult r = conelift::lift(f, *dec);
  if (!r.feasible) {
    out << "infeasible_point: " << r.failed_label << "\n";
    return kFailedRows;
  }

  const std::string prefix = opt.report.empty() ? opt.function + ".lift" : opt.report;
  const std::vector<std::string> names = component_names(inst);
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    std::ofstream file = open_output(prefix + "_" + names[i] + ".csv");
    file << "label,tail_flag," << header("x", inst.dim) << '\n';
    const SampledFunction& g = r.components[i];
    const bool negate = names[i] == "minus";
    for (std::size_t w = 0; w < g.values.size(); ++w) {
      file << g.space.labels[w] << ',' << (g.space.tail[w] ? 1 : 0) << ','
           << join(clean(negate ? Vector(-g.values[w]) : g.values[w], f.values[w].lpNorm<Eigen::Infinity>()))
           << '\n';
    }
  }
  out << "bound: " << fmt(dec->bound) << "\n"
      << "check,pass,worst,label\n";
  for (const auto& c : r.checks) {
    out << c.name << ',' << (c.pass ? "yes" : "no") << ',' << fmt(c.worst) << ',' << c.worst_label
        << '\n';
  }
  return r.pass() ? kOk : kFailedRows;
}

}  // namespace conelift::cli
