#pragma once

// Small hand-rolled generators for property tests.

#include <cmath>
#include <random>

#include "conelift/cones.hpp"
#include "conelift/types.hpp"

namespace gen {

using conelift::Cone;
using conelift::Matrix;
using conelift::Vector;

inline Vector normal(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline Vector unit(std::mt19937_64& rng, int n) {
  Vector v = normal(rng, n);
  return v / v.norm();
}

inline Matrix matrix(std::mt19937_64& rng, int r, int c) {
  Matrix m(r, c);
  for (int j = 0; j < c; ++j) m.col(j) = normal(rng, r);
  return m;
}

/// Random cone on R^n drawn from the representative families.
inline Cone cone(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> pick(0, 5);
  switch (pick(rng)) {
    case 0:
      return Cone::orthant(n);
    case 1:
      return Cone::halfspaces(matrix(rng, 1 + static_cast<int>(rng() % n), n));
    case 2:
      return Cone::generators(matrix(rng, n, 1 + static_cast<int>(rng() % (n + 2))));
    case 3:
      return Cone::second_order(n);
    case 4:
      return Cone::negation(Cone::orthant(n));
    default:
      if (n == 1) return Cone::orthant(1);
      return Cone::product({Cone::orthant(1), Cone::second_order(n - 1)});
  }
}

}  // namespace gen
