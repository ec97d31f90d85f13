#pragma once

#include <vector>

#include "conelift/types.hpp"

namespace conelift {

/// Conic program in the form
///
///   minimize    1/2 v'Pv + q'v
///   subject to  A v = b
///               G v + s = h,   s in R+^l x SOC(k_1) x ... x SOC(k_r)
///
/// Second-order blocks use the convention (t, u) with ||u||_2 <= t, the scalar first.
struct ConicProgram {
  Matrix P;  // empty when the objective is linear
  Vector q;
  Matrix A;
  Vector b;
  Matrix G;
  Vector h;
  int orthant_rows = 0;
  std::vector<int> soc_sizes;

  int num_variables() const { return static_cast<int>(q.size()); }
  bool has_quadratic() const { return P.size() > 0 && P.cwiseAbs().maxCoeff() > 0.0; }
  bool is_linear_program() const { return soc_sizes.empty() && !has_quadratic(); }
};

/// Incremental construction of a ConicProgram. Variables may be added at any time;
/// constraint blocks added earlier are zero-padded on the new columns.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(int initial_variables = 0);

  int add_variables(int count);
  int num_variables() const { return num_vars_; }

  /// rows * v == rhs
  void add_equality(const Matrix& rows, const Vector& rhs);
  /// rows * v + offset >= 0 componentwise
  void add_nonnegative(const Matrix& rows, const Vector& offset);
  /// rows * v + offset in SOC(rows.rows())
  void add_second_order(const Matrix& rows, const Vector& offset);

  void add_linear_objective(const Vector& coeff);
  void add_quadratic_objective(const Matrix& hessian);

  /// Selector for variables [first, first + count).
  Matrix selector(int first, int count) const;

  ConicProgram build() const;

 private:
  struct Block {
    Matrix rows;
    Vector offset;
  };

  Matrix pad(const Matrix& m) const;

  int num_vars_ = 0;
  std::vector<Block> equalities_;
  std::vector<Block> nonnegatives_;
  std::vector<Block> second_orders_;
  Vector linear_;
  Matrix quadratic_;
};

}  // namespace conelift
