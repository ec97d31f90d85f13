#include <cmath>
#include <random>

#include "conelift/ipm.hpp"
#include "conelift/program.hpp"
#include "conelift/simplex.hpp"
#include "doctest.h"

using namespace conelift;

TEST_CASE("simplex solves a small LP") {
  // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0  -> (1.6, 1.2)
  ProgramBuilder b(2);
  Matrix rows(2, 2);
  rows << -1, -2, -3, -1;
  b.add_nonnegative(rows, Vector::Constant(2, 0.0) + (Vector(2) << 4, 6).finished());
  b.add_nonnegative(Matrix::Identity(2, 2), Vector::Zero(2));
  b.add_linear_objective((Vector(2) << -1, -1).finished());
  const auto r = lp::solve(b.build());
  REQUIRE(r.status == lp::Status::Optimal);
  CHECK(r.x(0) == doctest::Approx(1.6));
  CHECK(r.x(1) == doctest::Approx(1.2));
  CHECK(r.value == doctest::Approx(-2.8));
}

TEST_CASE("simplex reports a Farkas certificate for an infeasible system") {
  // x >= 0, x == -1
  ProgramBuilder b(1);
  b.add_equality(Matrix::Ones(1, 1), Vector::Constant(1, -1.0));
  b.add_nonnegative(Matrix::Ones(1, 1), Vector::Zero(1));
  const auto prog = b.build();
  const auto r = lp::solve(prog);
  REQUIRE(r.status == lp::Status::Infeasible);
  const Vector resid = prog.A.transpose() * r.farkas_eq + prog.G.transpose() * r.farkas_cone;
  CHECK(resid.norm() < 1e-12);
  CHECK((r.farkas_cone.array() <= 1e-12).all());
  CHECK(prog.b.dot(r.farkas_eq) + prog.h.dot(r.farkas_cone) > 0.0);
}

TEST_CASE("simplex detects unboundedness") {
  ProgramBuilder b(1);
  b.add_nonnegative(Matrix::Ones(1, 1), Vector::Zero(1));
  b.add_linear_objective(Vector::Constant(1, -1.0));
  CHECK(lp::solve(b.build()).status == lp::Status::Unbounded);
}

TEST_CASE("lexicographic tie-break picks the smallest optimal vertex") {
  // min x + y s.t. x + y >= 1, x, y >= 0: optimal face is a segment.
  ProgramBuilder b(2);
  b.add_nonnegative(Matrix::Ones(1, 2), Vector::Constant(1, -1.0));
  b.add_nonnegative(Matrix::Identity(2, 2), Vector::Zero(2));
  b.add_linear_objective(Vector::Ones(2));
  const auto r = lp::solve_lexicographic(b.build(), {0, 1});
  REQUIRE(r.status == lp::Status::Optimal);
  CHECK(r.x(0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.x(1) == doctest::Approx(1.0));
}

TEST_CASE("Nesterov-Todd scaling maps z and s to the same point") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int l = 2;
    const std::vector<int> soc{3, 4};
    Vector s(9), z(9);
    for (int i = 0; i < 9; ++i) {
      s(i) = g(rng);
      z(i) = g(rng);
    }
    s.head(2) = s.head(2).cwiseAbs();
    z.head(2) = z.head(2).cwiseAbs();
    s(2) = s.segment(3, 2).norm() + 0.5;
    z(2) = z.segment(3, 2).norm() + 0.1;
    s(5) = s.segment(6, 3).norm() + 0.2;
    z(5) = z.segment(6, 3).norm() + 1.0;
    const ipm::cone_ops::Scaling w(s, z, l, soc);
    const Vector lz = w.apply(z);
    const Vector ls = w.apply_inverse(s);
    CHECK((lz - ls).norm() < 1e-10 * (1.0 + lz.norm()));
    CHECK((w.apply_inverse(w.apply(s)) - s).norm() < 1e-10 * (1.0 + s.norm()));
    const Vector v = Vector::LinSpaced(9, -1.0, 2.0);
    CHECK((w.squared() * v - w.apply(w.apply(v))).norm() < 1e-10 * (1.0 + v.norm()));
  }
}

TEST_CASE("interior point solves an LP to high accuracy") {
  ProgramBuilder b(2);
  Matrix rows(2, 2);
  rows << -1, -2, -3, -1;
  b.add_nonnegative(rows, (Vector(2) << 4, 6).finished());
  b.add_nonnegative(Matrix::Identity(2, 2), Vector::Zero(2));
  b.add_linear_objective((Vector(2) << -1, -1).finished());
  const auto r = ipm::solve(b.build());
  REQUIRE(r.status == ipm::Status::Optimal);
  CHECK(std::abs(r.x(0) - 1.6) < 1e-8);
  CHECK(std::abs(r.x(1) - 1.2) < 1e-8);
}

TEST_CASE("interior point solves a second-order cone program") {
  // min t s.t. ||(x - 3, y - 4)|| <= t, x + y == 1 -> distance from (3,4) to line x+y=1 = 6/sqrt(2)
  ProgramBuilder b(3);  // x, y, t
  b.add_equality((Matrix(1, 3) << 1, 1, 0).finished(), Vector::Constant(1, 1.0));
  Matrix rows(3, 3);
  rows << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  b.add_second_order(rows, (Vector(3) << 0, -3, -4).finished());
  b.add_linear_objective((Vector(3) << 0, 0, 1).finished());
  const auto r = ipm::solve(b.build());
  REQUIRE(r.status == ipm::Status::Optimal);
  CHECK(std::abs(r.x(2) - 6.0 / std::sqrt(2.0)) < 1e-8);
  CHECK(std::abs(r.x(0) - 0.0) < 1e-7);
  CHECK(std::abs(r.x(1) - 1.0) < 1e-7);
}

TEST_CASE("interior point handles a QP without strictly feasible points") {
  // min 1/2||c||^2 s.t. c == (1, 0), c >= 0 : slice is a single boundary point
  ProgramBuilder b(2);
  b.add_equality(Matrix::Identity(2, 2), (Vector(2) << 1, 0).finished());
  b.add_nonnegative(Matrix::Identity(2, 2), Vector::Zero(2));
  b.add_quadratic_objective(Matrix::Identity(2, 2));
  const auto r = ipm::solve(b.build());
  REQUIRE(r.status == ipm::Status::Optimal);
  CHECK(std::abs(r.x(0) - 1.0) < 1e-8);
  CHECK(std::abs(r.x(1)) < 1e-8);
}
