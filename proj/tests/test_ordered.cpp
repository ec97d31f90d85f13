#include <cmath>
#include <random>

#include "conelift/ordered.hpp"
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

OrderedSpace orthant(int d, NormTag tag) { return OrderedSpace(Cone::orthant(d), tag); }

// Closed-form lattice oracle: optimal parts are the componentwise ones.
double lattice_kind(NormTag tag, ConormalityKind kind, const Vector& x) {
  const double p = norm(tag, x.cwiseMax(0.0));
  const double m = norm(tag, x.cwiseMin(0.0));
  switch (kind) {
    case ConormalityKind::Plain:
      return p;
    case ConormalityKind::Max:
      return std::max(p, m);
    case ConormalityKind::Sum:
      break;
  }
  return p + m;
}
}  // namespace

TEST_CASE("ando decompositions on the plane") {
  const OrderedSpace sp = orthant(2, NormTag::L2);
  const AndoDecomposition a = ando_decompose(sp, vec({3, -4}));
  CHECK((a.plus - vec({3, 0})).norm() < 1e-9);
  CHECK((a.minus - vec({0, 4})).norm() < 1e-9);
  const AndoDecomposition b = ando_decompose(sp, vec({1, 2}));
  CHECK((b.plus - vec({1, 2})).norm() < 1e-9);
  CHECK(b.minus.norm() < 1e-9);
  const AndoDecomposition z = ando_decompose(sp, vec({0, 0}));
  CHECK(z.plus.isZero(0.0));
  CHECK(z.minus.isZero(0.0));
}

TEST_CASE("non-generating cones are rejected with a witness") {
  Matrix G(2, 1);
  G << 1, 1;
  const OrderedSpace ray(Cone::generators(G), NormTag::L2);
  try {
    ando_decompose(ray, vec({1, 0}));
    FAIL("expected NotGeneratingError");
  } catch (const NotGeneratingError& e) {
    REQUIRE(e.witness().size() == 2);
    CHECK(std::abs(e.witness()(0) - e.witness()(1)) > 1e-6);
  }
  const ConormalityReport r = conormality_constant(ray, ConormalityKind::Sum, small_sampler());
  CHECK_FALSE(r.finite);
  CHECK(std::isinf(r.alpha));
}

TEST_CASE("decomposer invariants") {
  std::mt19937_64 rng(3);
  for (NormTag tag : {NormTag::L1, NormTag::L2, NormTag::Linf}) {
    for (int trial = 0; trial < 6; ++trial) {
      const int d = 2 + trial % 2;
      const Cone cone = gen::cone(rng, d);
      const OrderedSpace sp(cone, tag);
      if (!is_surjective(sp.summing_map(), small_sampler(32)).surjective) continue;
      const AndoDecomposer dec(sp, small_sampler());
      for (int k = 0; k < 10; ++k) {
        const Vector x = gen::normal(rng, d);
        const AndoDecomposition a = dec(x);
        CHECK((a.plus - a.minus - x).norm() <= 1e-8 * (1 + x.norm()));
        CHECK(contains(cone, a.plus, 1e-8));
        CHECK(contains(cone, a.minus, 1e-8));
        CHECK(norm(tag, a.plus) + norm(tag, a.minus) <= dec.bound() * norm(tag, x) + 1e-8);
        const double lam = 0.25 + k;
        const AndoDecomposition s = dec(lam * x);
        CHECK((s.plus - lam * a.plus).norm() <= 1e-8 * (1 + lam * x.norm()));
        CHECK((s.minus - lam * a.minus).norm() <= 1e-8 * (1 + lam * x.norm()));
      }
    }
  }
}

TEST_CASE("lattice conormality constants") {
  const SamplerConfig cfg = small_sampler();
  CHECK(conormality_constant(orthant(2, NormTag::L1), ConormalityKind::Sum, cfg).alpha ==
        doctest::Approx(1.0).epsilon(1e-9));
  const ConormalityReport plain = conormality_constant(orthant(2, NormTag::L2), ConormalityKind::Plain, cfg);
  CHECK(plain.alpha == doctest::Approx(1.0).epsilon(1e-6));
  const ConormalityReport sum = conormality_constant(orthant(2, NormTag::L2), ConormalityKind::Sum, cfg);
  CHECK(sum.alpha == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(std::abs(std::abs(sum.worst_direction(0)) - std::sqrt(0.5)) < 1e-3);
  CHECK(sum.worst_direction(0) * sum.worst_direction(1) < 0.0);
  CHECK(conormality_constant(orthant(2, NormTag::Linf), ConormalityKind::Sum, cfg).alpha ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("conormality values match the lattice oracle") {
  std::mt19937_64 rng(17);
  for (NormTag tag : {NormTag::L1, NormTag::L2, NormTag::Linf}) {
    const OrderedSpace sp = orthant(3, tag);
    for (int k = 0; k < 20; ++k) {
      const Vector x = gen::normal(rng, 3);
      for (ConormalityKind kind : {ConormalityKind::Plain, ConormalityKind::Max, ConormalityKind::Sum}) {
        CHECK(conormality_value(sp, kind, x) ==
              doctest::Approx(lattice_kind(tag, kind, x)).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("kind ordering on random cones") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const NormTag tag = trial % 3 == 0 ? NormTag::L1 : (trial % 3 == 1 ? NormTag::Linf : NormTag::L2);
    const OrderedSpace sp(gen::cone(rng, 2), tag);
    if (!is_surjective(sp.summing_map(), small_sampler(32)).surjective) continue;
    const SamplerConfig cfg = small_sampler(64);
    const double p = conormality_constant(sp, ConormalityKind::Plain, cfg).alpha;
    const double m = conormality_constant(sp, ConormalityKind::Max, cfg).alpha;
    const double s = conormality_constant(sp, ConormalityKind::Sum, cfg).alpha;
    CHECK(p <= m * (1 + 1e-7));
    CHECK(m <= s * (1 + 1e-7));
    CHECK(s <= 2 * m * (1 + 1e-7));
    ++checked;
  }
  CHECK(checked > 3);
}

TEST_CASE("non-proper halfplane is generating with sum constant 1") {
  Matrix A(1, 2);
  A << 1, 0;
  const OrderedSpace half(Cone::halfspaces(A), NormTag::L2);
  CHECK(is_surjective(half.summing_map()).surjective);
  CHECK(conormality_constant(half, ConormalityKind::Sum, small_sampler()).alpha ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("continuous conormality") {
  const OrderedSpace sp = orthant(2, NormTag::L2);
  const SamplerConfig cfg = small_sampler(128);
  for (const auto& row : verify_continuous_conormality(sp, 1.0, {0.1, 0.01}, cfg)) {
    CHECK(row.pass);
    CHECK(row.worst_ratio <= 1.0 + row.epsilon);
    CHECK(row.worst_residual < 1e-8);
  }
  const auto low = verify_continuous_conormality(sp, 0.5, {0.01}, cfg);
  CHECK_FALSE(low[0].pass);
  REQUIRE(low[0].witness.size() == 2);
  CHECK(conormality_value(sp, ConormalityKind::Plain, low[0].witness) > 0.51);
  CHECK(verify_continuous_conormality(sp, 1.0, {1e6}, cfg)[0].pass);
}
