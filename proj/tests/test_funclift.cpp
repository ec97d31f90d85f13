#include <cmath>
#include <random>
#include <string>

#include "conelift/funclift.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace conelift;

namespace {
Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

SamplerConfig small_sampler(int samples = 256) {
  SamplerConfig cfg;
  cfg.samples = samples;
  return cfg;
}

SampledSpace grid(int n, int tail_from = -1) {
  SampledSpace s;
  for (int i = 0; i < n; ++i) {
    s.labels.push_back("w" + std::to_string(i));
    s.tail.push_back(tail_from >= 0 && i >= tail_from);
  }
  return s;
}

std::vector<Cone> lattice_cones(int d) { return {Cone::orthant(d), Cone::negation(Cone::orthant(d))}; }

const Decomposer& lattice_decomposer() {
  static const Decomposer dec = make_decomposer(lattice_cones(2), NormTag::L2, small_sampler());
  return dec;
}

SampledFunction sine_grid(int n) {
  SampledFunction f{grid(n, n - 20), {}};
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::acos(-1.0) * i / n;
    f.values.push_back(vec({std::sin(t), std::cos(t)}));
  }
  return f;
}

const PropertyCheck& check(const LiftResult& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("missing check " + name);
}
}  // namespace

TEST_CASE("sampled spaces validate labels") {
  SampledSpace s = grid(3);
  CHECK_NOTHROW(s.validate());
  s.labels[2] = "w0";
  CHECK_THROWS_AS(s.validate(), DomainError);
  SampledFunction f{grid(2), {vec({1, 0})}};
  CHECK_THROWS_AS(f.validate(), DomainError);
}

TEST_CASE("decomposer bound on the lattice") {
  CHECK(lattice_decomposer().bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
  CHECK(lattice_decomposer().components() == 2);
}

TEST_CASE("lifting a constant function gives constant components") {
  const Vector x0 = vec({0.7, -1.3});
  const SampledFunction f = tensor(grid(12, 10), Vector::Ones(12), x0);
  const LiftResult r = lift(f, lattice_decomposer());
  REQUIRE(r.feasible);
  CHECK(r.pass());
  const std::vector<Vector> g = lattice_decomposer().split(x0);
  for (int i = 0; i < 2; ++i) {
    for (const Vector& v : r.components[static_cast<std::size_t>(i)].values) {
      CHECK((v - g[static_cast<std::size_t>(i)]).norm() == 0.0);
    }
  }
}

TEST_CASE("zeros stay zero") {
  SampledFunction f = sine_grid(10);
  f.values[3].setZero();
  const LiftResult r = lift(f, lattice_decomposer());
  CHECK(check(r, "support").pass);
  CHECK(r.components[0].values[3].isZero(0.0));
  CHECK(r.components[1].values[3].isZero(0.0));
}

TEST_CASE("sine grid lift matches positive and negative parts") {
  const SampledFunction f = sine_grid(200);
  const LiftResult r = lift(f, lattice_decomposer());
  REQUIRE(r.feasible);
  for (const auto& c : r.checks) {
    INFO(c.name << " worst " << c.worst << " at " << c.worst_label);
    CHECK(c.pass);
  }
  for (std::size_t w = 0; w < f.values.size(); ++w) {
    CHECK((r.components[0].values[w] - f.values[w].cwiseMax(0.0)).norm() < 1e-8);
    CHECK((r.components[1].values[w] - f.values[w].cwiseMin(0.0)).norm() < 1e-8);
  }
}

TEST_CASE("consistency pairs are detected") {
  SampledFunction f{grid(3), {vec({1, -2}), vec({2, -4}), vec({0.5, 0.5})}};
  const LiftResult r = lift(f, lattice_decomposer());
  CHECK(r.pass());
  CHECK((r.components[0].values[1] - 2.0 * r.components[0].values[0]).norm() < 1e-8);
}

TEST_CASE("lifting over a non-generating family fails at a point") {
  const std::vector<Cone> cones{Cone::orthant(2)};
  CHECK_THROWS_AS(make_decomposer(cones, NormTag::L2, small_sampler()), NotGeneratingError);
  // Build the decomposer directly to see the pointwise failure.
  const Decomposer dec{RightInverse(ConeMap::summing(cones, NormTag::L2, NormTag::L2)), 1.0};
  SampledFunction f{grid(3), {vec({1, 1}), vec({-1, 0}), vec({0, 1})}};
  const LiftResult r = lift(f, dec);
  CHECK_FALSE(r.feasible);
  CHECK(r.failed_label == "w1");
  CHECK_FALSE(r.pass());
}

TEST_CASE("pointwise recovery") {
  const std::vector<Cone> cones = lattice_cones(2);
  const SampledSpace sp = grid(5);
  const Vector x = vec({0.4, -2.0});
  Vector phi(5);
  phi << 0.1, 0.5, 1.0, 0.5, 0.0;
  const LiftResult r = lift(tensor(sp, phi, x), lattice_decomposer());
  const std::vector<Vector> g = lattice_decomposer().split(x);

  const Recovered exact = pointwise_recover(r.components, cones, "w2", 1.0);
  CHECK(exact.valid);
  CHECK((exact.parts[0] - g[0]).norm() == 0.0);
  CHECK((exact.parts[1] - g[1]).norm() == 0.0);
  CHECK((exact.sum - x).norm() < 1e-12);

  const Recovered half = pointwise_recover(r.components, cones, "w1", 0.5);
  CHECK(half.valid);
  CHECK((half.sum - x).norm() < 1e-8);

  CHECK_THROWS_AS(pointwise_recover(r.components, cones, "w4", 0.0), DomainError);

  std::vector<SampledFunction> bad = r.components;
  bad[0].values[2] = vec({-1, 0});
  const Recovered flagged = pointwise_recover(bad, cones, "w2", 1.0);
  CHECK_FALSE(flagged.valid);
  CHECK(flagged.bad_component == 0);
}

TEST_CASE("function-space conormality") {
  const OrderedSpace sp(Cone::orthant(2), NormTag::L2);
  std::mt19937_64 rng(41);
  std::vector<SampledFunction> tests;
  for (int k = 0; k < 50; ++k) {
    SampledFunction f{grid(8), {}};
    for (int i = 0; i < 8; ++i) f.values.push_back(gen::normal(rng, 2));
    tests.push_back(std::move(f));
  }
  const double plain = function_space_conormality(sp, tests, ConormalityKind::Plain);
  CHECK(plain <= 1.0 + 1e-8);
  CHECK(plain >= 0.99);

  const Vector worst = vec({1, -1}) / std::sqrt(2.0);
  const SampledFunction c = tensor(grid(4), Vector::Ones(4), worst);
  CHECK(function_space_conormality(sp, {c}, ConormalityKind::Sum) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));

  // A bump φ ⊗ x with peak 1 reproduces m(x)/‖x‖ for every kind.
  Vector phi(5);
  phi << 0.0, 0.3, 1.0, 0.3, 0.0;
  const SampledFunction bump = tensor(grid(5), phi, worst);
  CHECK(function_space_conormality(sp, {bump}, ConormalityKind::Max) == doctest::Approx(std::sqrt(0.5)));
  CHECK(function_space_conormality(sp, {bump}, ConormalityKind::Sum) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));

  const SampledFunction zero = tensor(grid(3), Vector::Zero(3), worst);
  CHECK_THROWS_AS(function_space_conormality(sp, {zero}, ConormalityKind::Plain), DomainError);
  CHECK_THROWS_AS(function_space_conormality(sp, {}, ConormalityKind::Plain), DomainError);
}

TEST_CASE("sum conormality of a function couples its points") {
  // Each point alone has sum constant 1, but one needs a large plus part and
  // the other a large minus part.
  const OrderedSpace sp(Cone::orthant(2), NormTag::L2);
  SampledFunction f{grid(2), {vec({1, 0}), vec({0, -1})}};
  const double v = function_space_conormality(sp, {f}, ConormalityKind::Sum);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-5));
  SampledFunction g{grid(2), {vec({1, -1}) / std::sqrt(2.0), vec({1, 0})}};
  const double vg = function_space_conormality(sp, {g}, ConormalityKind::Sum);
  // The second point forces sup ‖f⁺‖ >= 1; the first then still needs ‖f⁻‖ >= 1/√2.
  CHECK(vg == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-5));
}
