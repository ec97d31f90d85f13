#pragma once

#include <memory>
#include <vector>

#include "conelift/program.hpp"
#include "conelift/types.hpp"

namespace conelift {

/// Closed convex cone with a finite description. Cones need not be proper:
/// C ∩ (-C) may be a nontrivial subspace. Values are immutable and cheap to copy.
class Cone {
 public:
  enum class Kind { Orthant, Halfspaces, Generators, SecondOrder, Negation, Product, DirectSumL1 };

  /// R^n_+.
  static Cone orthant(int n);
  /// {x : A x >= 0}; an A with zero rows gives the whole space.
  static Cone halfspaces(Matrix A);
  static Cone whole_space(int n);
  /// {G l : l >= 0}, generators are the columns of G. Redundant columns are allowed.
  static Cone generators(Matrix G);
  /// {(t, u) : ||u||_2 <= t}, scalar first.
  static Cone second_order(int n);
  static Cone negation(Cone inner);
  static Cone product(std::vector<Cone> parts);
  /// Product of cones living in a common space X, viewed inside the
  /// l1-direct sum of copies of X (norm = sum of component norms).
  static Cone direct_sum_l1(std::vector<Cone> parts);

  Kind kind() const { return node_->kind; }
  int ambient_dim() const { return node_->ambient; }
  /// Halfspace rows or generator columns.
  const Matrix& matrix() const { return node_->data; }
  const std::vector<Cone>& parts() const { return node_->parts; }
  const Cone& inner() const { return node_->parts.front(); }

  bool is_polyhedral() const;
  /// Component dimensions for the norm structure: the parts of a top-level
  /// DirectSumL1, otherwise the whole ambient space as one block.
  std::vector<int> norm_blocks() const;

 private:
  struct Node {
    Kind kind;
    int ambient;
    Matrix data;
    std::vector<Cone> parts;
  };
  explicit Cone(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Norm of an element of the space hosting `cone`: the sum of component norms
/// over norm_blocks(), each measured with `tag`.
double block_norm(const std::vector<int>& blocks, NormTag tag, const Vector& x);

/// True iff dist(x, C) <= tol * max(1, ||x||_2).
bool contains(const Cone& cone, const Vector& x, double tol = 1e-9);

/// Euclidean nearest point of C to z.
Vector project_l2(const Cone& cone, const Vector& z);

/// Dual cone {y : <y, c> >= 0 for all c in C}.
Cone dual(const Cone& cone);

enum class Combine { Product, DirectSumL1 };
Cone combine(Combine how, std::vector<Cone> parts);

/// Adds the constraint `rows * v ∈ C` on the builder's variables, introducing
/// auxiliary variables where the description needs them.
void lower(const Cone& cone, ProgramBuilder& builder, const Matrix& rows);

}  // namespace conelift
