#pragma once

#include "cosserat_dem/mesh.hpp"

#include <cmath>
#include <vector>

namespace cosserat_dem {

struct QuadraturePoint {
  Point x;
  double weight;
};

/// Degree-2 exact rule on a facet: 2-point Gauss on an edge, edge-midpoint
/// rule on each triangle of a fan triangulation in 3D. Weights sum to |F|.
inline std::vector<QuadraturePoint> facet_quadrature(const Mesh& mesh, const Facet& f) {
  const auto& X = mesh.vertices();
  std::vector<QuadraturePoint> q;
  if (mesh.dim() == 2) {
    const Point& a = X[f.vertices[0]];
    const Point& b = X[f.vertices[1]];
    const double s = 0.5 / std::sqrt(3.0);
    q.push_back({0.5 * (a + b) - s * (b - a), 0.5 * f.measure});
    q.push_back({0.5 * (a + b) + s * (b - a), 0.5 * f.measure});
    return q;
  }
  auto add_triangle = [&](const Point& a, const Point& b, const Point& c) {
    const double area = 0.5 * (b - a).cross(c - a).norm();
    q.push_back({0.5 * (a + b), area / 3.0});
    q.push_back({0.5 * (b + c), area / 3.0});
    q.push_back({0.5 * (c + a), area / 3.0});
  };
  const std::size_t n = f.vertices.size();
  if (n == 3) {
    add_triangle(X[f.vertices[0]], X[f.vertices[1]], X[f.vertices[2]]);
  } else {
    for (std::size_t i = 0; i < n; ++i) add_triangle(f.barycenter, X[f.vertices[i]], X[f.vertices[(i + 1) % n]]);
  }
  return q;
}

/// Degree-2 exact rule on a cell, built on sub-simplices (the cell itself for
/// triangles and tetrahedra). Weights sum to |c|.
inline std::vector<QuadraturePoint> cell_quadrature(const Mesh& mesh, Index cid) {
  const auto& X = mesh.vertices();
  const Cell& c = mesh.cell(cid);
  std::vector<QuadraturePoint> q;
  auto add_triangle = [&](const Point& a, const Point& b, const Point& d) {
    const double area = 0.5 * std::abs((b - a).cross(d - a).z());
    q.push_back({0.5 * (a + b), area / 3.0});
    q.push_back({0.5 * (b + d), area / 3.0});
    q.push_back({0.5 * (d + a), area / 3.0});
  };
  auto add_tet = [&](const Point& a, const Point& b, const Point& d, const Point& e) {
    const double vol = detail::tet_volume(a, b, d, e);
    const double alpha = 0.5854101966249685, beta = 0.1381966011250105;
    const Point p[4] = {a, b, d, e};
    for (int i = 0; i < 4; ++i) {
      Point x = Point::Zero();
      for (int k = 0; k < 4; ++k) x += (k == i ? alpha : beta) * p[k];
      q.push_back({x, vol / 4.0});
    }
  };
  if (mesh.dim() == 2) {
    const auto& v = c.vertices;
    if (v.size() == 3) {
      add_triangle(X[v[0]], X[v[1]], X[v[2]]);
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) add_triangle(c.barycenter, X[v[i]], X[v[(i + 1) % v.size()]]);
    }
    return q;
  }
  if (c.vertices.size() == 4) {
    add_tet(X[c.vertices[0]], X[c.vertices[1]], X[c.vertices[2]], X[c.vertices[3]]);
    return q;
  }
  for (Index fid : c.facets) {
    const Facet& f = mesh.facet(fid);
    for (std::size_t i = 0; i < f.vertices.size(); ++i)
      add_tet(c.barycenter, f.barycenter, X[f.vertices[i]], X[f.vertices[(i + 1) % f.vertices.size()]]);
  }
  return q;
}

}  // namespace cosserat_dem
