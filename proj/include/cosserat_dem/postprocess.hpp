#pragma once

#include "cosserat_dem/system.hpp"

#include <limits>
#include <vector>

namespace cosserat_dem {

/// Cellwise-constant strain, curvature, force stress and couple stress.
/// sigma and e are d x d; kappa and mu are r x d (row k is grad phi_k).
struct StressField {
  std::vector<Mat> strain;
  std::vector<Mat> curvature;
  std::vector<Mat> sigma;
  std::vector<Mat> mu;
};

inline StressField stress_field(const Discretization& disc, const Vec& q) {
  const int d = disc.dim(), r = disc.dofs().rotation_dim(), ns = disc.strain_size();
  if (q.size() != disc.dofs().size()) throw Error("stress_field: dof vector size mismatch");
  const Vec E = disc.strain_operator() * q;
  const Mat& C = disc.material().C();
  const Mat& D = disc.material().D();
  StressField s;
  const std::size_t N = disc.mesh().num_cells();
  s.strain.resize(N);
  s.curvature.resize(N);
  s.sigma.resize(N);
  s.mu.resize(N);
  for (std::size_t c = 0; c < N; ++c) {
    const Vec e = E.segment(static_cast<Eigen::Index>(c) * ns, d * d);
    const Vec k = E.segment(static_cast<Eigen::Index>(c) * ns + d * d, r * d);
    const Vec sg = C * e;
    const Vec m = D * k;
    // flattened row-major -> matrices
    s.strain[c] = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(e.data(), d, d);
    s.sigma[c] = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(sg.data(), d, d);
    s.curvature[c] = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(k.data(), r, d);
    s.mu[c] = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(m.data(), r, d);
  }
  return s;
}

/// Forces and couples exchanged through facets in the DEM reading of the
/// scheme. Interior vectors are stored once per facet and act with sign
/// +1 on cells[0] and -1 on cells[1].
struct FacetLoadSet {
  std::vector<Index> interior;
  std::vector<Vec> force;
  std::vector<Vec> couple;
  /// |c| eps:sigma_c per cell.
  std::vector<Vec> moment;
  std::vector<Index> boundary;
  /// |F| sigma_{c_F} n_F and |F| mu_{c_F} n_F on boundary facets.
  std::vector<Vec> boundary_force;
  std::vector<Vec> boundary_couple;
  /// v_{c_F} - R_F(v) per component (d + r) on boundary facets.
  std::vector<Vec> boundary_gap;
};

inline FacetLoadSet dem_post(const Discretization& disc, const Vec& q, const StressField& s) {
  const Mesh& mesh = disc.mesh();
  const int d = disc.dim(), r = disc.dofs().rotation_dim();
  FacetLoadSet out;
  for (Index f = 0; f < mesh.num_facets(); ++f) {
    const Facet& F = mesh.facet(f);
    const Vec n = F.normal.head(d);
    if (F.is_boundary()) {
      const Index c = F.cells[0];
      out.boundary.push_back(f);
      out.boundary_force.push_back(F.measure * (s.sigma[c] * n));
      out.boundary_couple.push_back(F.measure * (s.mu[c] * n));
      Vec gap(d + r);
      for (int comp = 0; comp < d + r; ++comp)
        gap[comp] = q[disc.dofs().component(c, comp)] - disc.facet_value(f, comp, q);
      out.boundary_gap.push_back(gap);
      continue;
    }
    const Index a = F.cells[0], b = F.cells[1];
    out.interior.push_back(f);
    out.force.push_back(F.measure * (0.5 * (s.sigma[a] + s.sigma[b]) * n));
    out.couple.push_back(F.measure * (0.5 * (s.mu[a] + s.mu[b]) * n));
  }
  out.moment.resize(mesh.num_cells());
  for (Index c = 0; c < mesh.num_cells(); ++c) out.moment[c] = mesh.cell(c).measure * stress_moment(d, s.sigma[c]);
  return out;
}

inline FacetLoadSet dem_post(const Discretization& disc, const Vec& q) { return dem_post(disc, q, stress_field(disc, q)); }

/// Per-cell resultant sum_F iota_{c,F} force_F over interior facets plus the
/// body force integral; zero for an interior cell in exact static balance.
inline std::vector<Vec> cell_balance(const Discretization& disc, const FacetLoadSet& loads, const BodyLoads& body = {},
                                     double t = 0.0) {
  const Mesh& mesh = disc.mesh();
  const int d = disc.dim();
  std::vector<Vec> res(mesh.num_cells(), Vec::Zero(d));
  for (std::size_t k = 0; k < loads.interior.size(); ++k) {
    const Facet& F = mesh.facet(loads.interior[k]);
    res[F.cells[0]] += loads.force[k];
    res[F.cells[1]] -= loads.force[k];
  }
  for (Index c = 0; c < mesh.num_cells(); ++c)
    for (const auto& qp : cell_quadrature(mesh, c)) res[c] += qp.weight * body.force(qp.x, t).head(d);
  return res;
}

/// Cell containing x (simplices), else the cell with the nearest barycenter.
inline Index locate_cell(const Mesh& mesh, const Point& x) {
  const auto& X = mesh.vertices();
  Index best = kNoCell;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    if (static_cast<int>(cell.vertices.size()) == mesh.dim() + 1) {
      std::vector<Point> pts;
      for (Index v : cell.vertices) pts.push_back(X[v]);
      const auto a = barycentric_coords(mesh.dim(), pts, x);
      bool inside = true;
      for (double v : a) inside = inside && v >= -1e-12;
      if (inside) return c;
    }
    const double dist = (cell.barycenter - x).squaredNorm();
    if (dist < best_d) {
      best_d = dist;
      best = c;
    }
  }
  return best;
}

/// Point probe of one dof component (0..d-1 displacement, d.. rotation).
struct Probe {
  std::string name;
  Point x = Point::Zero();
  int component = 0;
  Index cell = kNoCell;
};

inline void bind_probes(const Mesh& mesh, std::vector<Probe>& probes) {
  for (auto& p : probes) p.cell = locate_cell(mesh, p.x);
}

inline double probe_value(const Discretization& disc, const Probe& p, const Vec& q) {
  if (p.cell == kNoCell) throw Error("probe '" + p.name + "' is not bound to a cell");
  return disc.p1_value(p.cell, p.component, q, p.x);
}

}  // namespace cosserat_dem
