#include "conelift/program.hpp"

namespace conelift {

ProgramBuilder::ProgramBuilder(int initial_variables) : num_vars_(initial_variables) {}

int ProgramBuilder::add_variables(int count) {
  const int first = num_vars_;
  num_vars_ += count;
  return first;
}

Matrix ProgramBuilder::pad(const Matrix& m) const {
  if (m.cols() == num_vars_) return m;
  Matrix out = Matrix::Zero(m.rows(), num_vars_);
  out.leftCols(m.cols()) = m;
  return out;
}

void ProgramBuilder::add_equality(const Matrix& rows, const Vector& rhs) {
  require_dim(rows.rows(), rhs.size(), "equality block");
  if (rows.rows() == 0) return;
  equalities_.push_back({rows, rhs});
}

void ProgramBuilder::add_nonnegative(const Matrix& rows, const Vector& offset) {
  require_dim(rows.rows(), offset.size(), "nonnegative block");
  if (rows.rows() == 0) return;
  nonnegatives_.push_back({rows, offset});
}

void ProgramBuilder::add_second_order(const Matrix& rows, const Vector& offset) {
  require_dim(rows.rows(), offset.size(), "second-order block");
  if (rows.rows() == 0) return;
  if (rows.rows() == 1) {
    // SOC(1) is the half-line.
    nonnegatives_.push_back({rows, offset});
    return;
  }
  second_orders_.push_back({rows, offset});
}

void ProgramBuilder::add_linear_objective(const Vector& coeff) {
  Vector padded = Vector::Zero(num_vars_);
  padded.head(linear_.size()) = linear_;
  padded.head(coeff.size()) += coeff;
  linear_ = padded;
}

void ProgramBuilder::add_quadratic_objective(const Matrix& hessian) {
  Matrix padded = Matrix::Zero(num_vars_, num_vars_);
  padded.topLeftCorner(quadratic_.rows(), quadratic_.cols()) = quadratic_;
  padded.topLeftCorner(hessian.rows(), hessian.cols()) += hessian;
  quadratic_ = padded;
}

Matrix ProgramBuilder::selector(int first, int count) const {
  Matrix s = Matrix::Zero(count, num_vars_);
  for (int i = 0; i < count; ++i) s(i, first + i) = 1.0;
  return s;
}

ConicProgram ProgramBuilder::build() const {
  ConicProgram prog;
  const int n = num_vars_;
  prog.q = Vector::Zero(n);
  prog.q.head(linear_.size()) = linear_;
  if (quadratic_.size() > 0) {
    prog.P = Matrix::Zero(n, n);
    prog.P.topLeftCorner(quadratic_.rows(), quadratic_.cols()) = quadratic_;
  }

  Eigen::Index eq_rows = 0;
  for (const auto& blk : equalities_) eq_rows += blk.rows.rows();
  prog.A = Matrix::Zero(eq_rows, n);
  prog.b = Vector::Zero(eq_rows);
  Eigen::Index r = 0;
  for (const auto& blk : equalities_) {
    prog.A.block(r, 0, blk.rows.rows(), blk.rows.cols()) = blk.rows;
    prog.b.segment(r, blk.rows.rows()) = blk.offset;
    r += blk.rows.rows();
  }

  Eigen::Index cone_rows = 0;
  for (const auto& blk : nonnegatives_) cone_rows += blk.rows.rows();
  prog.orthant_rows = static_cast<int>(cone_rows);
  for (const auto& blk : second_orders_) {
    cone_rows += blk.rows.rows();
    prog.soc_sizes.push_back(static_cast<int>(blk.rows.rows()));
  }
  // rows*v + offset in K  <=>  G v + s = h with G = -rows, h = offset.
  prog.G = Matrix::Zero(cone_rows, n);
  prog.h = Vector::Zero(cone_rows);
  r = 0;
  auto emit = [&](const Block& blk) {
    prog.G.block(r, 0, blk.rows.rows(), blk.rows.cols()) = -blk.rows;
    prog.h.segment(r, blk.rows.rows()) = blk.offset;
    r += blk.rows.rows();
  };
  for (const auto& blk : nonnegatives_) emit(blk);
  for (const auto& blk : second_orders_) emit(blk);
  return prog;
}

}  // namespace conelift
