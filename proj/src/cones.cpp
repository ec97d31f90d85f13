#include "conelift/cones.hpp"

#include <numeric>

#include <Eigen/QR>

namespace conelift {

Cone Cone::orthant(int n) {
  if (n <= 0) throw DimensionError("orthant: dimension must be positive");
  return Cone(std::make_shared<const Node>(Node{Kind::Orthant, n, {}, {}}));
}

Cone Cone::halfspaces(Matrix A) {
  if (A.cols() <= 0) throw DimensionError("halfspaces: ambient dimension must be positive");
  const int n = static_cast<int>(A.cols());
  return Cone(std::make_shared<const Node>(Node{Kind::Halfspaces, n, std::move(A), {}}));
}

Cone Cone::whole_space(int n) { return halfspaces(Matrix(0, n)); }

Cone Cone::generators(Matrix G) {
  if (G.rows() <= 0) throw DimensionError("generators: ambient dimension must be positive");
  const int n = static_cast<int>(G.rows());
  return Cone(std::make_shared<const Node>(Node{Kind::Generators, n, std::move(G), {}}));
}

Cone Cone::second_order(int n) {
  if (n <= 0) throw DimensionError("second_order: dimension must be positive");
  return Cone(std::make_shared<const Node>(Node{Kind::SecondOrder, n, {}, {}}));
}

Cone Cone::negation(Cone inner) {
  const int n = inner.ambient_dim();
  return Cone(std::make_shared<const Node>(Node{Kind::Negation, n, {}, {std::move(inner)}}));
}

Cone Cone::product(std::vector<Cone> parts) {
  if (parts.empty()) throw DimensionError("product: needs at least one part");
  int n = 0;
  for (const auto& p : parts) n += p.ambient_dim();
  return Cone(std::make_shared<const Node>(Node{Kind::Product, n, {}, std::move(parts)}));
}

Cone Cone::direct_sum_l1(std::vector<Cone> parts) {
  if (parts.empty()) throw DimensionError("direct_sum_l1: needs at least one part");
  const int d = parts.front().ambient_dim();
  for (const auto& p : parts) require_dim(p.ambient_dim(), d, "direct_sum_l1 component");
  const int n = d * static_cast<int>(parts.size());
  return Cone(std::make_shared<const Node>(Node{Kind::DirectSumL1, n, {}, std::move(parts)}));
}

bool Cone::is_polyhedral() const {
  switch (kind()) {
    case Kind::Orthant:
    case Kind::Halfspaces:
    case Kind::Generators:
      return true;
    case Kind::SecondOrder:
      return ambient_dim() <= 2;
    case Kind::Negation:
      return inner().is_polyhedral();
    case Kind::Product:
    case Kind::DirectSumL1:
      return std::all_of(parts().begin(), parts().end(),
                         [](const Cone& c) { return c.is_polyhedral(); });
  }
  return false;
}

std::vector<int> Cone::norm_blocks() const {
  if (kind() != Kind::DirectSumL1) return {ambient_dim()};
  std::vector<int> out;
  for (const auto& p : parts()) out.push_back(p.ambient_dim());
  return out;
}

double block_norm(const std::vector<int>& blocks, NormTag tag, const Vector& x) {
  const int total = std::accumulate(blocks.begin(), blocks.end(), 0);
  require_dim(x.size(), total, "block_norm");
  double sum = 0.0;
  Eigen::Index off = 0;
  for (int k : blocks) {
    sum += norm(tag, x.segment(off, k));
    off += k;
  }
  return sum;
}

namespace {

Vector project_soc(const Vector& z) {
  const Eigen::Index k = z.size();
  const double t = z(0);
  if (k == 1) return Vector::Constant(1, std::max(t, 0.0));
  const double nu = z.tail(k - 1).norm();
  if (nu <= t) return z;
  if (nu <= -t) return Vector::Zero(k);
  Vector out(k);
  const double a = 0.5 * (t + nu);
  out(0) = a;
  out.tail(k - 1) = (a / nu) * z.tail(k - 1);
  return out;
}

/// Lawson-Hanson active set: nearest point of {G l : l >= 0} to z.
Vector project_onto_generated(const Matrix& G, const Vector& z) {
  const Eigen::Index g = G.cols();
  Vector lambda = Vector::Zero(g);
  std::vector<bool> passive(static_cast<std::size_t>(g), false);
  const double tol = 1e-13 * std::max(1.0, G.norm() * z.norm());
  auto solve_passive = [&](Vector& s) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < g; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Matrix sub(G.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = G.col(idx[k]);
    const Vector coef = Eigen::CompleteOrthogonalDecomposition<Matrix>(sub).solve(z);
    s = Vector::Zero(g);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = coef(static_cast<Eigen::Index>(k));
  };

  for (Eigen::Index outer = 0; outer < 3 * g + 30; ++outer) {
    const Vector w = G.transpose() * (z - G * lambda);
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < g; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[static_cast<std::size_t>(enter)] = true;
    for (Eigen::Index inner = 0; inner <= g; ++inner) {
      Vector s;
      solve_passive(s);
      double alpha = 1.0;
      bool clipped = false;
      for (Eigen::Index j = 0; j < g; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          const double den = lambda(j) - s(j);
          const double a = den > 0.0 ? lambda(j) / den : 0.0;
          if (a < alpha) alpha = a;
          clipped = true;
        }
      }
      if (!clipped) {
        lambda = s;
        break;
      }
      lambda += alpha * (s - lambda);
      for (Eigen::Index j = 0; j < g; ++j) {
        if (passive[static_cast<std::size_t>(j)] && lambda(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          lambda(j) = 0.0;
        }
      }
    }
  }
  return G * lambda;
}

}  // namespace

Vector project_l2(const Cone& cone, const Vector& z) {
  require_dim(z.size(), cone.ambient_dim(), "project_l2");
  switch (cone.kind()) {
    case Cone::Kind::Orthant:
      return z.cwiseMax(0.0);
    case Cone::Kind::Halfspaces:
      if (cone.matrix().rows() == 0) return z;
      if (cone.matrix().rows() == 1) {
        const Vector a = cone.matrix().row(0).transpose();
        const double v = a.dot(z);
        const double aa = a.squaredNorm();
        if (v >= 0.0 || aa == 0.0) return z;
        return z - (v / aa) * a;
      }
      if ((cone.matrix() * z).minCoeff() >= 0.0) return z;
      // Moreau: z minus its projection onto the polar cone generated by -A'.
      return z - project_onto_generated(-cone.matrix().transpose(), z);
    case Cone::Kind::Generators:
      if (cone.matrix().cols() == 0) return Vector::Zero(z.size());
      return project_onto_generated(cone.matrix(), z);
    case Cone::Kind::SecondOrder:
      return project_soc(z);
    case Cone::Kind::Negation:
      return -project_l2(cone.inner(), -z);
    case Cone::Kind::Product:
    case Cone::Kind::DirectSumL1: {
      Vector out(z.size());
      Eigen::Index off = 0;
      for (const auto& p : cone.parts()) {
        const int k = p.ambient_dim();
        out.segment(off, k) = project_l2(p, z.segment(off, k));
        off += k;
      }
      return out;
    }
  }
  return z;
}

bool contains(const Cone& cone, const Vector& x, double tol) {
  require_dim(x.size(), cone.ambient_dim(), "contains");
  const double eff = tol * std::max(1.0, x.norm());
  switch (cone.kind()) {
    case Cone::Kind::Orthant:
      return x.cwiseMin(0.0).norm() <= eff;
    case Cone::Kind::Halfspaces:
      if (cone.matrix().rows() == 0 || (cone.matrix() * x).minCoeff() >= 0.0) return true;
      return (project_l2(cone, x) - x).norm() <= eff;
    case Cone::Kind::Generators:
    case Cone::Kind::SecondOrder:
      return (project_l2(cone, x) - x).norm() <= eff;
    case Cone::Kind::Negation:
      return contains(cone.inner(), -x, tol);
    case Cone::Kind::Product:
    case Cone::Kind::DirectSumL1: {
      Eigen::Index off = 0;
      for (const auto& p : cone.parts()) {
        const int k = p.ambient_dim();
        if (!contains(p, x.segment(off, k), tol)) return false;
        off += k;
      }
      return true;
    }
  }
  return false;
}

Cone dual(const Cone& cone) {
  switch (cone.kind()) {
    case Cone::Kind::Orthant:
      return Cone::orthant(cone.ambient_dim());
    case Cone::Kind::Halfspaces:
      return Cone::generators(cone.matrix().transpose());
    case Cone::Kind::Generators:
      return Cone::halfspaces(cone.matrix().transpose());
    case Cone::Kind::SecondOrder:
      return Cone::second_order(cone.ambient_dim());
    case Cone::Kind::Negation:
      return Cone::negation(dual(cone.inner()));
    case Cone::Kind::Product:
    case Cone::Kind::DirectSumL1: {
      std::vector<Cone> parts;
      for (const auto& p : cone.parts()) parts.push_back(dual(p));
      return Cone::product(std::move(parts));
    }
  }
  throw UnsupportedError("dual: unsupported cone variant");
}

Cone combine(Combine how, std::vector<Cone> parts) {
  return how == Combine::Product ? Cone::product(std::move(parts))
                                 : Cone::direct_sum_l1(std::move(parts));
}

void lower(const Cone& cone, ProgramBuilder& builder, const Matrix& rows) {
  require_dim(rows.rows(), cone.ambient_dim(), "lower");
  const Eigen::Index n = cone.ambient_dim();
  switch (cone.kind()) {
    case Cone::Kind::Orthant:
      builder.add_nonnegative(rows, Vector::Zero(n));
      return;
    case Cone::Kind::Halfspaces:
      if (cone.matrix().rows() > 0) {
        builder.add_nonnegative(cone.matrix() * rows, Vector::Zero(cone.matrix().rows()));
      }
      return;
    case Cone::Kind::Generators: {
      const Matrix& G = cone.matrix();
      const auto g = static_cast<int>(G.cols());
      if (g == 0) {
        builder.add_equality(rows, Vector::Zero(n));
        return;
      }
      const int first = builder.add_variables(g);
      Matrix eq = Matrix::Zero(n, builder.num_variables());
      eq.leftCols(rows.cols()) = rows;
      eq.middleCols(first, g) = -G;
      builder.add_equality(eq, Vector::Zero(n));
      builder.add_nonnegative(builder.selector(first, g), Vector::Zero(g));
      return;
    }
    case Cone::Kind::SecondOrder:
      if (n == 2) {
        // {(t, u) : |u| <= t} is the pair of halfspaces t - u >= 0, t + u >= 0.
        Matrix split(2, 2);
        split << 1, -1, 1, 1;
        builder.add_nonnegative(split * rows, Vector::Zero(2));
        return;
      }
      builder.add_second_order(rows, Vector::Zero(n));
      return;
    case Cone::Kind::Negation:
      lower(cone.inner(), builder, -rows);
      return;
    case Cone::Kind::Product:
    case Cone::Kind::DirectSumL1: {
      Eigen::Index off = 0;
      for (const auto& p : cone.parts()) {
        const int k = p.ambient_dim();
        lower(p, builder, rows.middleRows(off, k));
        off += k;
      }
      return;
    }
  }
}

}  // namespace conelift
