#include <cmath>
#include <random>

#include "conelift/conemap.hpp"
#include "doctest.h"
#include "instances.hpp"

using namespace conelift;

namespace {
Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Lattice oracle: the optimal decomposition is (x+, x-), so m(x) = |x+| + |x-|.
double lattice_oracle(NormTag tag, const Vector& x) {
  return norm(tag, x.cwiseMax(0.0)) + norm(tag, x.cwiseMin(0.0));
}

double lattice_grid_sup(NormTag tag, int points) {
  const double pi = std::acos(-1.0);
  double best = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = 2.0 * pi * k / points;
    Vector x = vec({std::cos(t), std::sin(t)});
    x /= norm(tag, x);
    best = std::max(best, lattice_oracle(tag, x));
  }
  return best;
}

SamplerConfig small_sampler() {
  SamplerConfig cfg;
  cfg.samples = 256;
  return cfg;
}
}  // namespace

TEST_CASE("apply") {
  const ConeMap lat = gen::lattice_map(2, NormTag::L2);
  CHECK(apply(lat, vec({1, 0, -2, 0})).isApprox(vec({-1, 0})));
  CHECK_THROWS_AS(apply(lat, vec({-1, 0, -2, 0})), DomainError);
  CHECK(apply(lat, vec({-1, 0, -2, 0}), false).isApprox(vec({-3, 0})));
  Matrix D(2, 2);
  D << 1, 0, 0, 2;
  CHECK(apply(ConeMap(D, Cone::orthant(2), NormTag::L2, NormTag::L2), vec({1, 1})).isApprox(vec({1, 2})));
}

TEST_CASE("minimal preimages") {
  const ConeMap line = gen::lattice_map(1, NormTag::L1);
  const Preimage p = min_preimage(line, vec({-3}));
  REQUIRE(p.feasible());
  CHECK(p.point.isApprox(vec({0, -3}), 1e-12));
  CHECK(p.value == doctest::Approx(3.0));

  const Preimage z = min_preimage(line, vec({0}));
  REQUIRE(z.feasible());
  CHECK(z.point.isZero());
  CHECK(z.value == 0.0);

  const Matrix T = vec({1, 0}).transpose();
  const Cone c = Cone::orthant(2);
  const Preimage bad = min_preimage(ConeMap(T, c, NormTag::L2, NormTag::L2), vec({-1}));
  REQUIRE(bad.status == SolveStatus::Infeasible);
  CHECK(bad.certificate.dot(vec({-1})) > 0.0);
  CHECK(contains(Cone::negation(dual(c)), T.transpose() * bad.certificate, 1e-8));
}

TEST_CASE("surjectivity") {
  CHECK(is_surjective(gen::lattice_map(2, NormTag::L2)).surjective);
  const auto r = is_surjective(ConeMap(vec({1, 0}).transpose(), Cone::orthant(2), NormTag::L2, NormTag::L2));
  CHECK_FALSE(r.surjective);
  CHECK(r.mode == VerdictMode::Exact);

  const auto id = is_surjective(ConeMap(Matrix::Identity(2, 2), Cone::orthant(2), NormTag::L2, NormTag::L2));
  REQUIRE_FALSE(id.surjective);
  CHECK(id.witness(0) < 0.0);
  CHECK(id.witness(1) < 0.0);

  Matrix A(1, 2);
  A << 1, 0;
  const Cone h = Cone::halfspaces(A);
  CHECK(is_surjective(ConeMap::summing({h, Cone::negation(h)}, NormTag::L2, NormTag::L2)).surjective);
  CHECK_FALSE(is_surjective(ConeMap(Matrix::Identity(2, 2), h, NormTag::L2, NormTag::L2)).surjective);

  const auto ice = is_surjective(ConeMap(Matrix::Identity(3, 3), Cone::second_order(3), NormTag::L2, NormTag::L2));
  CHECK(ice.mode == VerdictMode::Sampled);
  CHECK_FALSE(ice.surjective);
  const auto ice2 = is_surjective(ConeMap::summing(
      {Cone::second_order(3), Cone::negation(Cone::second_order(3))}, NormTag::L2, NormTag::L2));
  CHECK(ice2.mode == VerdictMode::Sampled);
  CHECK(ice2.surjective);
}

TEST_CASE("lattice openness constants match the grid oracle") {
  for (NormTag tag : {NormTag::L1, NormTag::Linf, NormTag::L2}) {
    const double oracle = lattice_grid_sup(tag, 10000);
    const OpennessReport rep = openness_constant(gen::lattice_map(2, tag), small_sampler());
    REQUIRE(rep.finite);
    CHECK(rep.lower <= rep.upper);
    CHECK(rep.lower == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(rep.upper == doctest::Approx(oracle).epsilon(1e-5));
  }
  CHECK(lattice_grid_sup(NormTag::L1, 10000) == doctest::Approx(1.0));
  CHECK(lattice_grid_sup(NormTag::Linf, 10000) == doctest::Approx(2.0));
  CHECK(lattice_grid_sup(NormTag::L2, 10000) == doctest::Approx(std::sqrt(2.0)));

  const auto bad = openness_constant(ConeMap(vec({1, 0}).transpose(), Cone::orthant(2), NormTag::L2, NormTag::L2));
  CHECK_FALSE(bad.finite);
  CHECK(std::isinf(bad.upper));
  REQUIRE(bad.witness.size() == 1);
  CHECK(bad.witness(0) < 0.0);
}

TEST_CASE("interior radius") {
  CHECK(interior_radius(ConeMap(Matrix::Identity(2, 2), Cone::whole_space(2), NormTag::L2, NormTag::L2),
                        small_sampler())
            .radius == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(interior_radius(gen::lattice_map(2, NormTag::Linf), small_sampler()).radius ==
        doctest::Approx(0.5).epsilon(1e-8));
  CHECK(interior_radius(ConeMap(vec({1, 0}).transpose(), Cone::orthant(2), NormTag::L2, NormTag::L2))
            .radius == 0.0);
}

TEST_CASE("gauge norm examples") {
  const GaugeNorm id(ConeMap(Matrix::Identity(2, 2), Cone::whole_space(2), NormTag::L2, NormTag::L2));
  CHECK(id(vec({3, 4})) == doctest::Approx(5.0));
  const GaugeNorm lat(gen::lattice_map(2, NormTag::L2));
  CHECK(lat(vec({1, -1})) == doctest::Approx(2.0));
  CHECK(lat(vec({0, 0})) == 0.0);
  const GaugeNorm half(ConeMap(Matrix::Identity(2, 2), Cone::orthant(2), NormTag::L2, NormTag::L2));
  CHECK_THROWS_AS(half(vec({1, 1})), InfeasibleError);
}

TEST_CASE("property: m is positively homogeneous and subadditive") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> lam(0.0, 10.0);
  for (NormTag tag : {NormTag::L1, NormTag::L2, NormTag::Linf}) {
    const ConeMap map = gen::lattice_map(3, tag);
    for (int k = 0; k < 200; ++k) {
      const Vector x = gen::normal(rng, 3);
      const Vector y = gen::normal(rng, 3);
      const double l = lam(rng);
      const double mx = min_preimage_value(map, x);
      CHECK(std::abs(min_preimage_value(map, l * x) - l * mx) <= 1e-8 * std::max(1.0, l * mx));
      CHECK(min_preimage_value(map, x + y) <= mx + min_preimage_value(map, y) + 1e-8);
      CHECK(mx == doctest::Approx(lattice_oracle(tag, x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("property: gauge norm axioms and equivalence sandwich") {
  std::mt19937_64 rng(32);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const ConeMap map = gen::polyhedral_map(rng);
    if (!is_surjective(map).surjective) continue;
    const GaugeNorm g(map, small_sampler());
    const double K = g.upper_constant();
    const double M = g.lower_constant();
    for (int k = 0; k < 30; ++k) {
      const Vector x = gen::normal(rng, map.dim());
      const Vector y = gen::normal(rng, map.dim());
      const double gx = g(x);
      CHECK(g(x + y) <= gx + g(y) + 1e-8);
      CHECK(g(-x) == doctest::Approx(gx).epsilon(1e-9));
      CHECK(gx > 0.0);
      CHECK(map.norm_in_codomain(x) <= M * gx + 1e-8);
      CHECK(gx <= K * map.norm_in_codomain(x) + 1e-8);
    }
    ++checked;
  }
  CHECK(checked > 5);
}

TEST_CASE("property: surjectivity, finite K and positive radius agree") {
  std::mt19937_64 rng(33);
  int surjective = 0;
  int total = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const ConeMap map = gen::polyhedral_map(rng);
    const bool s = is_surjective(map).surjective;
    const OpennessReport K = openness_constant(map, small_sampler());
    const RadiusReport r = interior_radius(map, small_sampler());
    CHECK(s == K.finite);
    CHECK(s == (r.radius > 0.0));
    if (s) {
      CHECK(K.certified);
      CHECK(std::abs(r.radius * K.upper - 1.0) <= 1e-6);
      ++surjective;
    }
    ++total;
  }
  CHECK(surjective > 0);
  CHECK(surjective < total);
}
