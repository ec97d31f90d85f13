#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conelift/funclift.hpp"

namespace py = pybind11;
using namespace conelift;

namespace {

NormTag tag_of(const std::string& name) { return parse_norm_tag(name); }

Functional seminorm(const Matrix& R, const std::string& norm) {
  return Functional::norm(NormExpr::seminorm(R, tag_of(norm)));
}

py::dict sup_dict(double lower, double upper, bool certified, const Vector& dir) {
  py::dict d;
  d["lower"] = lower;
  d["upper"] = upper;
  d["certified"] = certified;
  d["worst_direction"] = dir;
  return d;
}

SamplerConfig sampler(int samples, std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cone-valued right inverses, openness and conormality constants";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<NotGeneratingError>(m, "NotGeneratingError", PyExc_RuntimeError);

  py::class_<Cone>(m, "Cone")
      .def_static("orthant", &Cone::orthant)
      .def_static("halfspaces", &Cone::halfspaces)
      .def_static("whole_space", &Cone::whole_space)
      .def_static("generators", &Cone::generators)
      .def_static("second_order", &Cone::second_order)
      .def_static("negation", &Cone::negation)
      .def_static("product", &Cone::product)
      .def_property_readonly("dim", &Cone::ambient_dim)
      .def_property_readonly("is_polyhedral", &Cone::is_polyhedral)
      .def("contains", [](const Cone& c, const Vector& x, double tol) { return contains(c, x, tol); },
           py::arg("x"), py::arg("tol") = 1e-9)
      .def("project", [](const Cone& c, const Vector& z) { return project_l2(c, z); })
      .def("dual", [](const Cone& c) { return dual(c); });

  py::class_<ConeMap>(m, "ConeMap")
      .def(py::init([](const Matrix& T, const Cone& cone, const std::string& domain_norm,
                       const std::string& codomain_norm) {
             return ConeMap(T, cone, tag_of(domain_norm), tag_of(codomain_norm));
           }),
           py::arg("matrix"), py::arg("cone"), py::arg("domain_norm") = "l2",
           py::arg("codomain_norm") = "l2")
      .def_static("summing",
                  [](std::vector<Cone> cones, const std::string& component_norm,
                     const std::string& codomain_norm) {
                    return ConeMap::summing(std::move(cones), tag_of(component_norm),
                                            tag_of(codomain_norm));
                  },
                  py::arg("cones"), py::arg("component_norm") = "l2", py::arg("codomain_norm") = "l2")
      .def_property_readonly("matrix", &ConeMap::matrix)
      .def_property_readonly("cone", &ConeMap::cone)
      .def_property_readonly("dim", &ConeMap::dim)
      .def_property_readonly("domain_dim", &ConeMap::domain_dim)
      .def("__call__", [](const ConeMap& map, const Vector& c) { return apply(map, c); });

  m.def("is_surjective",
        [](const ConeMap& map, int samples, std::uint64_t seed) {
          const SurjectivityReport r = is_surjective(map, sampler(samples, seed));
          py::dict d;
          d["surjective"] = r.surjective;
          d["mode"] = std::string(to_string(r.mode));
          d["witness"] = r.witness;
          d["certificate"] = r.certificate;
          return d;
        },
        py::arg("map"), py::arg("samples") = 4096, py::arg("seed") = 1);

  m.def("openness_constant",
        [](const ConeMap& map, int samples, std::uint64_t seed) {
          const OpennessReport r = openness_constant(map, sampler(samples, seed));
          py::dict d = sup_dict(r.lower, r.upper, r.certified, r.worst_direction);
          d["finite"] = r.finite;
          return d;
        },
        py::arg("map"), py::arg("samples") = 4096, py::arg("seed") = 1);

  m.def("interior_radius",
        [](const ConeMap& map, int samples, std::uint64_t seed) {
          return interior_radius(map, sampler(samples, seed)).radius;
        },
        py::arg("map"), py::arg("samples") = 4096, py::arg("seed") = 1);

  m.def("min_preimage", [](const ConeMap& map, const Vector& x) {
    const Preimage p = min_preimage(map, x);
    py::dict d;
    d["status"] = std::string(to_string(p.status));
    d["point"] = p.point;
    d["value"] = p.value;
    d["certificate"] = p.certificate;
    return d;
  });

  py::class_<GaugeNorm>(m, "GaugeNorm")
      .def(py::init([](const ConeMap& map, int samples, std::uint64_t seed) {
             return GaugeNorm(map, sampler(samples, seed));
           }),
           py::arg("map"), py::arg("samples") = 4096, py::arg("seed") = 1)
      .def("__call__", &GaugeNorm::operator())
      .def_property_readonly("upper_constant", &GaugeNorm::upper_constant)
      .def_property_readonly("lower_constant", &GaugeNorm::lower_constant);

  py::class_<RightInverse>(m, "RightInverse")
      .def(py::init([](const ConeMap& map) { return RightInverse(map); }))
      .def(py::init([](const ConeMap& map, const std::vector<std::tuple<Matrix, std::string, double>>& cons,
                       double epsilon) {
             std::vector<RhoBound> bounds;
             for (const auto& [R, norm, alpha] : cons) bounds.push_back({seminorm(R, norm), alpha});
             return RightInverse(map, std::move(bounds), epsilon);
           }),
           py::arg("map"), py::arg("seminorm_bounds"), py::arg("epsilon") = 1e-3)
      .def("__call__", &RightInverse::operator())
      .def_property_readonly("constrained", &RightInverse::constrained);

  m.def("achievable_alpha",
        [](const ConeMap& map, const Matrix& R, const std::string& norm, double K, int samples,
           std::uint64_t seed) {
          const AlphaReport r = achievable_alpha(map, seminorm(R, norm), K, sampler(samples, seed));
          py::dict d = sup_dict(r.alpha, r.upper, r.certified, r.worst_direction);
          d["feasible"] = r.feasible;
          return d;
        },
        py::arg("map"), py::arg("seminorm"), py::arg("norm"), py::arg("K"), py::arg("samples") = 4096,
        py::arg("seed") = 1);

  py::class_<OrderedSpace>(m, "OrderedSpace")
      .def(py::init([](const Cone& cone, const std::string& norm) {
             return OrderedSpace(cone, tag_of(norm));
           }),
           py::arg("positive_cone"), py::arg("norm") = "l2")
      .def_property_readonly("dim", &OrderedSpace::dim)
      .def("summing_map", &OrderedSpace::summing_map);

  m.def("ando_decompose", [](const OrderedSpace& sp, const Vector& x) {
    const AndoDecomposition a = ando_decompose(sp, x);
    return py::make_tuple(a.plus, a.minus);
  });

  auto kind_of = [](const std::string& k) {
    if (k == "plain") return ConormalityKind::Plain;
    if (k == "max") return ConormalityKind::Max;
    if (k == "sum") return ConormalityKind::Sum;
    throw DomainError("unknown conormality kind: " + k);
  };

  m.def("conormality_value",
        [kind_of](const OrderedSpace& sp, const std::string& kind, const Vector& x) {
          return conormality_value(sp, kind_of(kind), x);
        });

  m.def("conormality_constant",
        [kind_of](const OrderedSpace& sp, const std::string& kind, int samples, std::uint64_t seed) {
          const ConormalityReport r = conormality_constant(sp, kind_of(kind), sampler(samples, seed));
          py::dict d = sup_dict(r.alpha, r.upper, r.certified, r.worst_direction);
          d["finite"] = r.finite;
          return d;
        },
        py::arg("space"), py::arg("kind") = "sum", py::arg("samples") = 4096, py::arg("seed") = 1);

  // Functions on a sampled domain are passed as (labels, tail flags, n×d values).
  m.def("lift",
        [](const std::vector<Cone>& cones, const std::string& norm, const std::vector<std::string>& labels,
           const std::vector<bool>& tail, const Matrix& values, int samples, std::uint64_t seed) {
          const Decomposer dec = make_decomposer(cones, tag_of(norm), sampler(samples, seed));
          SampledFunction f{{labels, tail}, {}};
          for (Eigen::Index i = 0; i < values.rows(); ++i) f.values.push_back(values.row(i).transpose());
          const LiftResult r = lift(f, dec);
          py::dict d;
          d["feasible"] = r.feasible;
          d["failed_label"] = r.failed_label;
          d["bound"] = dec.bound;
          py::list parts;
          for (const SampledFunction& c : r.components) {
            Matrix M(static_cast<Eigen::Index>(c.values.size()), c.dim());
            for (std::size_t i = 0; i < c.values.size(); ++i)
              M.row(static_cast<Eigen::Index>(i)) = c.values[i].transpose();
            parts.append(M);
          }
          d["components"] = parts;
          py::dict checks;
          for (const PropertyCheck& c : r.checks) checks[py::str(c.name)] = py::make_tuple(c.pass, c.worst);
          d["checks"] = checks;
          d["pass"] = r.pass();
          return d;
        },
        py::arg("cones"), py::arg("norm"), py::arg("labels"), py::arg("tail"), py::arg("values"),
        py::arg("samples") = 4096, py::arg("seed") = 1);
}
