#pragma once

#include "cosserat_dem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace cosserat_dem {

/// Barycentric interpolation of one facet barycenter from d+1 cell barycenters.
struct FacetStencil {
  Index facet = 0;
  std::vector<Index> cells;
  std::vector<double> coefficients;
};

struct StencilOptions {
  /// Neighbour-expansion rounds before the subset search.
  int rounds = 2;
  /// Extra rounds allowed when no non-degenerate subset exists.
  int emergency_rounds = 1;
  /// A simplex is rejected when its volume is below this fraction of h_F^d.
  double degeneracy = 1e-10;
  /// First subset in ranked order with all |alpha| below this bound wins;
  /// otherwise the subset with the smallest max |alpha|.
  double max_coefficient = 4.0;
};

namespace detail {

inline double simplex_volume(int dim, const std::vector<Point>& p) {
  if (dim == 2) return 0.5 * std::abs((p[1] - p[0]).cross(p[2] - p[0]).z());
  return tet_volume(p[0], p[1], p[2], p[3]);
}

/// The facet's cells, expanded `rounds` times by facet neighbours.
inline std::vector<Index> neighbourhood(const Mesh& mesh, Index f, int rounds) {
  std::set<Index> set;
  const Facet& F = mesh.facet(f);
  for (Index c : F.cells)
    if (c != kNoCell) set.insert(c);
  for (int r = 0; r < rounds; ++r) {
    std::vector<Index> current(set.begin(), set.end());
    for (Index c : current)
      for (Index n : mesh.cell_neighbors(c)) set.insert(n);
  }
  return {set.begin(), set.end()};
}

}  // namespace detail

/// Candidate cells ranked by barycenter distance to x_F, ties broken by id.
inline std::vector<Index> ranked_candidates(const Mesh& mesh, Index f, int rounds) {
  auto cand = detail::neighbourhood(mesh, f, rounds);
  const Point& xf = mesh.facet(f).barycenter;
  std::stable_sort(cand.begin(), cand.end(), [&](Index a, Index b) {
    const double da = (mesh.cell(a).barycenter - xf).squaredNorm();
    const double db = (mesh.cell(b).barycenter - xf).squaredNorm();
    if (da != db) return da < db;
    return a < b;
  });
  return cand;
}

/// Chooses the d+1 support cells of facet f. Subsets of the ranked
/// neighbourhood are scanned in lexicographic order; among non-degenerate
/// ones the first with bounded barycentric coefficients is taken, else the
/// one with the smallest largest coefficient.
inline std::vector<Index> select_support(const Mesh& mesh, Index f, const StencilOptions& opt = {}) {
  const int d = mesh.dim();
  const std::size_t k = static_cast<std::size_t>(d + 1);
  const Facet& F = mesh.facet(f);
  const double threshold = opt.degeneracy * std::pow(F.diameter, d);
  for (int rounds = opt.rounds; rounds <= opt.rounds + opt.emergency_rounds; ++rounds) {
    const auto cand = ranked_candidates(mesh, f, rounds);
    const std::size_t n = cand.size();
    if (n < k) continue;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Point> pts(k);
    std::vector<Index> best;
    double best_score = std::numeric_limits<double>::infinity();
    Mat A(k, k);
    Vec rhs(k);
    while (true) {
      for (std::size_t i = 0; i < k; ++i) pts[i] = mesh.cell(cand[idx[i]]).barycenter;
      if (detail::simplex_volume(d, pts) > threshold) {
        for (std::size_t j = 0; j < k; ++j) {
          A(0, j) = 1.0;
          for (int i = 0; i < d; ++i) A(i + 1, j) = pts[j][i] - F.barycenter[i];
        }
        rhs.setZero();
        rhs(0) = 1.0;
        const double score = A.partialPivLu().solve(rhs).cwiseAbs().maxCoeff();
        if (score < best_score) {
          best_score = score;
          best.resize(k);
          for (std::size_t i = 0; i < k; ++i) best[i] = cand[idx[i]];
          if (score <= opt.max_coefficient) return best;
        }
      }
      // next combination in lexicographic order
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!best.empty()) return best;
  }
  throw Error("no non-degenerate reconstruction stencil for facet " + std::to_string(f));
}

/// Barycentric coordinates of x with respect to d+1 points; entries may be
/// negative when x lies outside the simplex.
inline std::vector<double> barycentric_coords(int dim, const std::vector<Point>& pts, const Point& x) {
  const int n = dim + 1;
  if (static_cast<int>(pts.size()) != n) throw Error("barycentric_coords: expected d+1 points");
  Mat A(n, n);
  Vec rhs(n);
  for (int j = 0; j < n; ++j) {
    A(0, j) = 1.0;
    for (int i = 0; i < dim; ++i) A(i + 1, j) = pts[static_cast<std::size_t>(j)][i];
  }
  rhs(0) = 1.0;
  for (int i = 0; i < dim; ++i) rhs(i + 1) = x[i];
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, (p - pts[0]).norm());
  if (!(detail::simplex_volume(dim, pts) > 1e-14 * std::pow(scale, dim)))
    throw Error("barycentric_coords: degenerate simplex");
  Eigen::FullPivLU<Mat> lu(A);
  Vec alpha = lu.solve(rhs);
  return {alpha.data(), alpha.data() + n};
}

/// Facet reconstruction operator: facet value = sum_c alpha_F^c v_c.
class FacetReconstruction {
 public:
  FacetReconstruction() = default;

  static FacetReconstruction build(const Mesh& mesh, const StencilOptions& opt = {}) {
    FacetReconstruction r;
    r.num_cells_ = mesh.num_cells();
    r.stencils_.resize(mesh.num_facets());
    for (Index f = 0; f < mesh.num_facets(); ++f) {
      FacetStencil& s = r.stencils_[f];
      s.facet = f;
      s.cells = select_support(mesh, f, opt);
      std::vector<Point> pts;
      for (Index c : s.cells) pts.push_back(mesh.cell(c).barycenter);
      s.coefficients = barycentric_coords(mesh.dim(), pts, mesh.facet(f).barycenter);
    }
    return r;
  }

  const std::vector<FacetStencil>& stencils() const { return stencils_; }
  const FacetStencil& stencil(Index f) const { return stencils_[f]; }
  std::size_t num_cells() const { return num_cells_; }

  /// Scalar operator (#facets x #cells).
  SpMat matrix() const {
    std::vector<Triplet> t;
    for (const auto& s : stencils_)
      for (std::size_t k = 0; k < s.cells.size(); ++k)
        t.emplace_back(static_cast<int>(s.facet), static_cast<int>(s.cells[k]), s.coefficients[k]);
    return from_triplets(static_cast<Eigen::Index>(stencils_.size()), static_cast<Eigen::Index>(num_cells_), t);
  }

  double apply(Index f, const Vec& cell_values) const {
    const auto& s = stencils_[f];
    double v = 0.0;
    for (std::size_t k = 0; k < s.cells.size(); ++k) v += s.coefficients[k] * cell_values[static_cast<Eigen::Index>(s.cells[k])];
    return v;
  }

  /// CSV dump: facet, support cell ids, coefficients.
  void write_csv(std::ostream& out) const {
    out << "facet,cells,alphas\n";
    out.precision(17);
    for (const auto& s : stencils_) {
      out << s.facet << ",";
      for (std::size_t k = 0; k < s.cells.size(); ++k) out << (k ? " " : "") << s.cells[k];
      out << ",";
      for (std::size_t k = 0; k < s.coefficients.size(); ++k) out << (k ? " " : "") << s.coefficients[k];
      out << "\n";
    }
  }

 private:
  std::vector<FacetStencil> stencils_;
  std::size_t num_cells_ = 0;
};

/// Cellwise gradient G_c(v) = sum_k v_{cells[k]} (x) weights[k].
struct CellGradientOperator {
  Index cell = 0;
  std::vector<Index> cells;
  std::vector<Point> weights;

  Point apply(const Vec& cell_values) const {
    Point g = Point::Zero();
    for (std::size_t k = 0; k < cells.size(); ++k) g += cell_values[static_cast<Eigen::Index>(cells[k])] * weights[k];
    return g;
  }
};

class GradientReconstruction {
 public:
  GradientReconstruction() = default;

  /// G_c(v) = sum_{F in dc} |F|/|c| R_F(v) n_{F,c}.
  static GradientReconstruction build(const Mesh& mesh, const FacetReconstruction& R) {
    GradientReconstruction g;
    g.dim_ = mesh.dim();
    g.ops_.resize(mesh.num_cells());
    for (Index c = 0; c < mesh.num_cells(); ++c) {
      CellGradientOperator& op = g.ops_[c];
      op.cell = c;
      const Cell& cell = mesh.cell(c);
      for (Index f : cell.facets) {
        const Facet& F = mesh.facet(f);
        const Point w = (F.measure / cell.measure) * F.outward_normal(c);
        const auto& s = R.stencil(f);
        for (std::size_t k = 0; k < s.cells.size(); ++k) {
          auto it = std::find(op.cells.begin(), op.cells.end(), s.cells[k]);
          if (it == op.cells.end()) {
            op.cells.push_back(s.cells[k]);
            op.weights.push_back(s.coefficients[k] * w);
          } else {
            op.weights[static_cast<std::size_t>(it - op.cells.begin())] += s.coefficients[k] * w;
          }
        }
      }
    }
    return g;
  }

  int dim() const { return dim_; }
  const CellGradientOperator& cell(Index c) const { return ops_[c]; }
  const std::vector<CellGradientOperator>& operators() const { return ops_; }

  /// Scalar operator (#cells*d x #cells), row c*d + j holds d/dx_j.
  SpMat matrix() const {
    std::vector<Triplet> t;
    for (const auto& op : ops_)
      for (std::size_t k = 0; k < op.cells.size(); ++k)
        for (int j = 0; j < dim_; ++j)
          t.emplace_back(static_cast<int>(op.cell * dim_ + j), static_cast<int>(op.cells[k]), op.weights[k][j]);
    return from_triplets(static_cast<Eigen::Index>(ops_.size() * dim_), static_cast<Eigen::Index>(ops_.size()), t);
  }

 private:
  int dim_ = 0;
  std::vector<CellGradientOperator> ops_;
};

/// Nonconforming P1 value of a scalar cell field: v_c + G_c(v).(x - x_c).
inline double p1_eval(const Mesh& mesh, const GradientReconstruction& G, Index c, const Vec& cell_values, const Point& x) {
  return cell_values[static_cast<Eigen::Index>(c)] + G.cell(c).apply(cell_values).dot(x - mesh.cell(c).barycenter);
}

struct StencilStatistics {
  /// max over facets of max_c |x_c - x_F| / h, h the largest cell diameter.
  double max_distance_ratio = 0.0;
  /// min over facets of simplex volume / h_F^d.
  double min_volume_ratio = 0.0;
  double max_abs_coefficient = 0.0;
};

inline StencilStatistics stencil_statistics(const Mesh& mesh, const FacetReconstruction& R) {
  StencilStatistics s;
  s.min_volume_ratio = std::numeric_limits<double>::infinity();
  const double h = mesh.max_cell_diameter();
  for (const auto& st : R.stencils()) {
    const Facet& F = mesh.facet(st.facet);
    std::vector<Point> pts;
    for (Index c : st.cells) {
      pts.push_back(mesh.cell(c).barycenter);
      s.max_distance_ratio = std::max(s.max_distance_ratio, (pts.back() - F.barycenter).norm() / h);
    }
    s.min_volume_ratio = std::min(s.min_volume_ratio, detail::simplex_volume(mesh.dim(), pts) / std::pow(F.diameter, mesh.dim()));
    for (double a : st.coefficients) s.max_abs_coefficient = std::max(s.max_abs_coefficient, std::abs(a));
  }
  return s;
}

}  // namespace cosserat_dem
