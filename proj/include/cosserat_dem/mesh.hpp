#pragma once

#include "cosserat_dem/core.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cosserat_dem {

struct Cell {
  std::vector<Index> vertices;
  std::vector<Index> facets;
  Point barycenter = Point::Zero();
  double measure = 0.0;
  double diameter = 0.0;
};

struct Facet {
  /// Ordered vertex loop (an edge in 2D).
  std::vector<Index> vertices;
  Point barycenter = Point::Zero();
  double measure = 0.0;
  /// Largest vertex-to-vertex distance; this is the h_F of the penalty terms.
  double diameter = 0.0;
  /// Unit normal pointing out of cells[0] (into cells[1] for interior facets).
  Point normal = Point::Zero();
  std::array<Index, 2> cells{kNoCell, kNoCell};
  std::string tag;

  bool is_boundary() const { return cells[1] == kNoCell; }

  /// +1 for the cell the normal points away from, -1 for the other one.
  int orientation(Index c) const {
    if (c == cells[0]) return 1;
    if (c == cells[1]) return -1;
    throw Error("cell is not adjacent to facet");
  }

  Point outward_normal(Index c) const { return orientation(c) * normal; }

  Index other_cell(Index c) const { return c == cells[0] ? cells[1] : cells[0]; }
};

/// Polytopal cell/facet complex with planar facets. Immutable once built.
class Mesh {
 public:
  Mesh() = default;

  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const Cell& cell(Index c) const { return cells_[c]; }
  const Facet& facet(Index f) const { return facets_[f]; }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_facets() const { return facets_.size(); }

  std::vector<Index> interior_facets() const {
    std::vector<Index> out;
    for (Index f = 0; f < facets_.size(); ++f)
      if (!facets_[f].is_boundary()) out.push_back(f);
    return out;
  }

  std::vector<Index> boundary_facets() const {
    std::vector<Index> out;
    for (Index f = 0; f < facets_.size(); ++f)
      if (facets_[f].is_boundary()) out.push_back(f);
    return out;
  }

  std::vector<Index> facets_with_tag(const std::string& tag) const {
    std::vector<Index> out;
    for (Index f = 0; f < facets_.size(); ++f)
      if (facets_[f].is_boundary() && facets_[f].tag == tag) out.push_back(f);
    return out;
  }

  /// Cells sharing a facet with c.
  std::vector<Index> cell_neighbors(Index c) const {
    std::vector<Index> out;
    for (Index f : cells_[c].facets) {
      const Index o = facets_[f].other_cell(c);
      if (o != kNoCell) out.push_back(o);
    }
    return out;
  }

  double total_measure() const {
    double s = 0.0;
    for (const auto& c : cells_) s += c.measure;
    return s;
  }

  double max_cell_diameter() const {
    double h = 0.0;
    for (const auto& c : cells_) h = std::max(h, c.diameter);
    return h;
  }

  /// Sum over facets of |F| n_{F,c}; zero for every closed cell.
  Point closure_defect(Index c) const {
    Point s = Point::Zero();
    for (Index f : cells_[c].facets) s += facets_[f].measure * facets_[f].outward_normal(c);
    return s;
  }

  /// Builds a mesh from cells given as lists of facet vertex loops.
  /// `cell_vertices` lists each cell's vertices (2D: ordered polygon loop).
  static Mesh from_facet_loops(int dim, std::vector<Point> vertices,
                               std::vector<std::vector<Index>> cell_vertices,
                               const std::vector<std::vector<std::vector<Index>>>& cell_facets);

  /// 2D polygons (ordered loops, any orientation) or 3D tetrahedra.
  static Mesh from_cells(int dim, std::vector<Point> vertices, std::vector<std::vector<Index>> cells);

  /// Tags boundary facets from explicit vertex lists; every listed facet must
  /// be a boundary facet of the mesh.
  void tag_boundary(const std::map<std::string, std::vector<std::vector<Index>>>& tags);

  /// Tags boundary facets through a function of the facet (empty string = leave as is).
  template <class Fn>
  void tag_boundary_by(Fn&& fn) {
    for (auto& f : facets_)
      if (f.is_boundary()) {
        std::string t = fn(f);
        if (!t.empty()) f.tag = std::move(t);
      }
  }

 private:
  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::vector<Facet> facets_;
};

namespace detail {

inline std::vector<Index> sorted_key(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline double point_set_diameter(const std::vector<Point>& pts, const std::vector<Index>& ids) {
  double d = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) d = std::max(d, (pts[ids[i]] - pts[ids[j]]).norm());
  return d;
}

inline double tet_volume(const Point& a, const Point& b, const Point& c, const Point& d) {
  return std::abs((b - a).dot((c - a).cross(d - a))) / 6.0;
}

}  // namespace detail

inline Mesh Mesh::from_facet_loops(int dim, std::vector<Point> vertices,
                                   std::vector<std::vector<Index>> cell_vertices,
                                   const std::vector<std::vector<std::vector<Index>>>& cell_facets) {
  if (dim != 2 && dim != 3) throw Error("mesh dimension must be 2 or 3");
  if (cell_vertices.size() != cell_facets.size()) throw Error("cell vertex and facet lists differ in length");
  Mesh m;
  m.dim_ = dim;
  m.vertices_ = std::move(vertices);
  if (dim == 2)
    for (auto& p : m.vertices_) p.z() = 0.0;
  const auto& X = m.vertices_;

  std::map<std::vector<Index>, Index> facet_ids;
  m.cells_.resize(cell_vertices.size());
  for (Index c = 0; c < cell_vertices.size(); ++c) {
    Cell& cell = m.cells_[c];
    cell.vertices = std::move(cell_vertices[c]);
    for (Index v : cell.vertices)
      if (v >= X.size()) throw Error("cell " + std::to_string(c) + " references unknown vertex " + std::to_string(v));
    for (const auto& loop : cell_facets[c]) {
      if (loop.size() < static_cast<std::size_t>(dim)) throw Error("facet with too few vertices in cell " + std::to_string(c));
      auto key = detail::sorted_key(loop);
      auto it = facet_ids.find(key);
      Index f;
      if (it == facet_ids.end()) {
        f = m.facets_.size();
        facet_ids.emplace(std::move(key), f);
        Facet nf;
        nf.vertices = loop;
        nf.cells[0] = c;
        m.facets_.push_back(std::move(nf));
      } else {
        f = it->second;
        Facet& ef = m.facets_[f];
        if (ef.cells[1] != kNoCell || ef.cells[0] == c)
          throw Error("facet shared by more than two cells (cell " + std::to_string(c) + ")");
        ef.cells[1] = c;
      }
      cell.facets.push_back(f);
    }
  }

  // Facet geometry.
  for (auto& f : m.facets_) {
    f.diameter = detail::point_set_diameter(X, f.vertices);
    if (dim == 2) {
      const Point& a = X[f.vertices[0]];
      const Point& b = X[f.vertices[1]];
      const Point t = b - a;
      f.measure = t.norm();
      f.barycenter = 0.5 * (a + b);
      f.normal = Point(t.y(), -t.x(), 0.0) / f.measure;
    } else {
      const std::size_t n = f.vertices.size();
      Point newell = Point::Zero();
      for (std::size_t i = 0; i < n; ++i) newell += X[f.vertices[i]].cross(X[f.vertices[(i + 1) % n]]);
      f.measure = 0.5 * newell.norm();
      if (!(f.measure > 0.0)) throw Error("degenerate facet");
      f.normal = newell.normalized();
      Point centroid = Point::Zero();
      double area = 0.0;
      const Point& p0 = X[f.vertices[0]];
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const Point& p1 = X[f.vertices[i]];
        const Point& p2 = X[f.vertices[i + 1]];
        const double a = 0.5 * (p1 - p0).cross(p2 - p0).norm();
        centroid += a * (p0 + p1 + p2) / 3.0;
        area += a;
      }
      f.barycenter = centroid / area;
      for (Index v : f.vertices)
        if (std::abs(f.normal.dot(X[v] - f.barycenter)) > 1e-9 * f.diameter)
          throw Error("non-planar facet");
    }
    if (!(f.measure > 0.0)) throw Error("zero-measure facet");
  }

  // Cell geometry.
  for (Index c = 0; c < m.cells_.size(); ++c) {
    Cell& cell = m.cells_[c];
    cell.diameter = detail::point_set_diameter(X, cell.vertices);
    if (dim == 2) {
      double area2 = 0.0;
      Point centroid = Point::Zero();
      const std::size_t n = cell.vertices.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Point& p = X[cell.vertices[i]];
        const Point& q = X[cell.vertices[(i + 1) % n]];
        const double cr = p.x() * q.y() - q.x() * p.y();
        area2 += cr;
        centroid += cr * (p + q);
      }
      cell.measure = std::abs(0.5 * area2);
      if (cell.measure > 0.0) cell.barycenter = centroid / (3.0 * area2);
    } else {
      Point ref = Point::Zero();
      for (Index v : cell.vertices) ref += X[v];
      ref /= static_cast<double>(cell.vertices.size());
      double vol = 0.0;
      Point centroid = Point::Zero();
      for (Index fid : cell.facets) {
        const Facet& f = m.facets_[fid];
        const std::size_t n = f.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
          const Point& a = X[f.vertices[i]];
          const Point& b = X[f.vertices[(i + 1) % n]];
          const double v = detail::tet_volume(ref, f.barycenter, a, b);
          vol += v;
          centroid += v * (ref + f.barycenter + a + b) / 4.0;
        }
      }
      cell.measure = vol;
      if (vol > 0.0) cell.barycenter = centroid / vol;
    }
    if (!(cell.measure > 1e-14 * std::pow(cell.diameter, dim)))
      throw Error("zero-measure cell " + std::to_string(c));
  }

  // Orient normals away from cells[0].
  for (auto& f : m.facets_) {
    if (f.normal.dot(f.barycenter - m.cells_[f.cells[0]].barycenter) < 0.0) {
      f.normal = -f.normal;
      if (dim == 2) std::reverse(f.vertices.begin(), f.vertices.end());
    }
  }
  return m;
}

inline Mesh Mesh::from_cells(int dim, std::vector<Point> vertices, std::vector<std::vector<Index>> cells) {
  std::vector<std::vector<std::vector<Index>>> loops(cells.size());
  for (Index c = 0; c < cells.size(); ++c) {
    const auto& v = cells[c];
    if (dim == 2) {
      if (v.size() < 3) throw Error("2D cell with fewer than 3 vertices");
      for (std::size_t i = 0; i < v.size(); ++i) loops[c].push_back({v[i], v[(i + 1) % v.size()]});
    } else {
      if (v.size() != 4)
        throw Error("3D cells given by vertex lists must be tetrahedra; use from_facet_loops for polyhedra");
      loops[c] = {{v[1], v[2], v[3]}, {v[0], v[3], v[2]}, {v[0], v[1], v[3]}, {v[0], v[2], v[1]}};
    }
  }
  return from_facet_loops(dim, std::move(vertices), std::move(cells), loops);
}

inline void Mesh::tag_boundary(const std::map<std::string, std::vector<std::vector<Index>>>& tags) {
  std::map<std::vector<Index>, Index> lookup;
  for (Index f = 0; f < facets_.size(); ++f) lookup.emplace(detail::sorted_key(facets_[f].vertices), f);
  for (const auto& [tag, lists] : tags) {
    for (const auto& verts : lists) {
      auto it = lookup.find(detail::sorted_key(verts));
      if (it == lookup.end()) throw Error("tagged facet '" + tag + "' does not exist in the mesh");
      Facet& f = facets_[it->second];
      if (!f.is_boundary()) throw Error("tagged facet '" + tag + "' is not a boundary facet");
      f.tag = tag;
    }
  }
}

/// Options for the structured generators.
struct GridOptions {
  Point origin = Point::Zero();
  /// Random displacement of interior vertices, as a fraction of the grid spacing.
  double jitter = 0.0;
  std::uint64_t seed = 1;
};

/// Structured triangulation of [x0, x0+lx] x [y0, y0+ly]; every rectangle is
/// cut along its (i,j)-(i+1,j+1) diagonal. Boundary tags: left, right, bottom, top.
inline Mesh generate_rect_mesh(double lx, double ly, std::size_t nx, std::size_t ny, const GridOptions& opt = {}) {
  if (nx < 1 || ny < 1 || !(lx > 0.0) || !(ly > 0.0)) throw Error("generate_rect_mesh: invalid parameters");
  const double hx = lx / static_cast<double>(nx);
  const double hy = ly / static_cast<double>(ny);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jit(-opt.jitter, opt.jitter);
  std::vector<Point> X;
  X.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i) {
      Point p = opt.origin + Point(hx * static_cast<double>(i), hy * static_cast<double>(j), 0.0);
      if (opt.jitter > 0.0 && i > 0 && i < nx && j > 0 && j < ny) {
        p.x() += jit(rng) * hx;
        p.y() += jit(rng) * hy;
      }
      X.push_back(p);
    }
  auto id = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  std::vector<std::vector<Index>> cells;
  cells.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  Mesh m = Mesh::from_cells(2, std::move(X), std::move(cells));
  const Point o = opt.origin;
  const double tol = 1e-9 * std::min(hx, hy);
  m.tag_boundary_by([&](const Facet& f) -> std::string {
    const Point& x = f.barycenter;
    if (std::abs(x.x() - o.x()) < tol) return "left";
    if (std::abs(x.x() - o.x() - lx) < tol) return "right";
    if (std::abs(x.y() - o.y()) < tol) return "bottom";
    if (std::abs(x.y() - o.y() - ly) < tol) return "top";
    return "";
  });
  return m;
}

/// Structured tetrahedral mesh of a box: each hexahedron is split into six
/// tetrahedra around its main diagonal. Tags: xmin, xmax, ymin, ymax, zmin, zmax.
inline Mesh generate_box_mesh(const Point& lengths, std::array<std::size_t, 3> n, const GridOptions& opt = {}) {
  for (int k = 0; k < 3; ++k)
    if (n[k] < 1 || !(lengths[k] > 0.0)) throw Error("generate_box_mesh: invalid parameters");
  const Point h(lengths.x() / n[0], lengths.y() / n[1], lengths.z() / n[2]);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jit(-opt.jitter, opt.jitter);
  auto id = [&](std::size_t i, std::size_t j, std::size_t k) { return (k * (n[1] + 1) + j) * (n[0] + 1) + i; };
  std::vector<Point> X;
  for (std::size_t k = 0; k <= n[2]; ++k)
    for (std::size_t j = 0; j <= n[1]; ++j)
      for (std::size_t i = 0; i <= n[0]; ++i) {
        Point p = opt.origin + Point(h.x() * i, h.y() * j, h.z() * k);
        const bool interior = i > 0 && i < n[0] && j > 0 && j < n[1] && k > 0 && k < n[2];
        if (opt.jitter > 0.0 && interior)
          for (int a = 0; a < 3; ++a) p[a] += jit(rng) * h[a];
        X.push_back(p);
      }
  // Kuhn subdivision: paths from corner 0 to corner 7 through the cube.
  static constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                                      {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};
  std::vector<std::vector<Index>> cells;
  for (std::size_t k = 0; k < n[2]; ++k)
    for (std::size_t j = 0; j < n[1]; ++j)
      for (std::size_t i = 0; i < n[0]; ++i) {
        Index corner[8];
        for (int b = 0; b < 8; ++b) corner[b] = id(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1));
        for (const auto& t : kTets) cells.push_back({corner[t[0]], corner[t[1]], corner[t[2]], corner[t[3]]});
      }
  Mesh m = Mesh::from_cells(3, std::move(X), std::move(cells));
  const double tol = 1e-9 * h.minCoeff();
  static const char* names[3][2] = {{"xmin", "xmax"}, {"ymin", "ymax"}, {"zmin", "zmax"}};
  m.tag_boundary_by([&](const Facet& f) -> std::string {
    for (int a = 0; a < 3; ++a) {
      if (std::abs(f.barycenter[a] - opt.origin[a]) < tol) return names[a][0];
      if (std::abs(f.barycenter[a] - opt.origin[a] - lengths[a]) < tol) return names[a][1];
    }
    return "";
  });
  return m;
}

/// Disjoint partition of the facets into interior, Dirichlet and Neumann sets.
struct FacetPartition {
  std::vector<Index> interior;
  std::vector<Index> dirichlet;
  std::vector<Index> neumann;
};

template <class Predicate>
FacetPartition classify_facets(const Mesh& mesh, Predicate&& is_dirichlet) {
  FacetPartition p;
  for (Index f = 0; f < mesh.num_facets(); ++f) {
    const Facet& F = mesh.facet(f);
    if (!F.is_boundary()) {
      p.interior.push_back(f);
      continue;
    }
    if (F.tag.empty()) throw Error("untagged boundary facet " + std::to_string(f));
    (is_dirichlet(F.tag) ? p.dirichlet : p.neumann).push_back(f);
  }
  return p;
}

}  // namespace cosserat_dem
