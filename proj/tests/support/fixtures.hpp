#pragma once

#include <cosserat_dem/mesh.hpp>
#include <cosserat_dem/system.hpp>

#include <random>

namespace testing_support {

using namespace cosserat_dem;

/// Structured 2D triangulation of [0,1]^2 shifted to (0.3, -0.2).
inline Mesh square_mesh(std::size_t n = 6, double jitter = 0.0) {
  GridOptions opt;
  opt.origin = Point(0.3, -0.2, 0.0);
  opt.jitter = jitter;
  return generate_rect_mesh(1.0, 1.0, n, n, opt);
}

/// Unstructured tetrahedral mesh: a Kuhn-split box with interior vertices
/// displaced randomly.
inline Mesh tet_mesh(std::size_t n = 3, double jitter = 0.2) {
  GridOptions opt;
  opt.origin = Point(-0.1, 0.2, 0.05);
  opt.jitter = jitter;
  opt.seed = 7;
  return generate_box_mesh(Point(1.0, 0.8, 0.9), {n, n, n}, opt);
}

inline Vec random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = U(gen);
  return v;
}

/// Dof vector sampling an affine displacement A x + b and affine rotation
/// W x + w at cell barycenters.
inline Vec affine_dofs(const Discretization& disc, const Mat& A, const Vec& b, const Mat& W, const Vec& w) {
  const int d = disc.dim(), r = disc.dofs().rotation_dim();
  Vec q(disc.dofs().size());
  for (Index c = 0; c < disc.mesh().num_cells(); ++c) {
    const Vec x = disc.mesh().cell(c).barycenter.head(d);
    const Vec u = A * x + b;
    const Vec p = W * x + w;
    for (int i = 0; i < d; ++i) q[disc.dofs().u(c, i)] = u[i];
    for (int k = 0; k < r; ++k) q[disc.dofs().phi(c, k)] = p[k];
  }
  return q;
}

inline Material unit_material(int dim) {
  if (dim == 2) return Material(CosseratMaterial2D{1.0, 0.25, 0.5, 0.1, 1.0, 0.01});
  return Material(CosseratMaterial3D{2.0, 1.0, 0.4, 0.02, 0.03, 0.01, 1.0, 0.01});
}

}  // namespace testing_support
