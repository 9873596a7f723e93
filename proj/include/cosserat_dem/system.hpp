#pragma once

#include "cosserat_dem/material.hpp"
#include "cosserat_dem/mesh.hpp"
#include "cosserat_dem/quadrature.hpp"
#include "cosserat_dem/reconstruction.hpp"

#include <unsupported/Eigen/SparseExtra>

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cosserat_dem {

/// Cell-centred dof layout: per cell d displacement components then r
/// rotation components.
class DofMap {
 public:
  DofMap() = default;
  DofMap(int dim, std::size_t num_cells) : dim_(dim), rot_(rotation_components(dim)), num_cells_(num_cells) {}

  int dim() const { return dim_; }
  int rotation_dim() const { return rot_; }
  int per_cell() const { return dim_ + rot_; }
  std::size_t num_cells() const { return num_cells_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(num_cells_) * per_cell(); }

  Eigen::Index offset(Index c) const { return static_cast<Eigen::Index>(c) * per_cell(); }
  Eigen::Index u(Index c, int i) const { return offset(c) + i; }
  Eigen::Index phi(Index c, int k) const { return offset(c) + dim_ + k; }
  /// Component 0..d+r-1 of cell c.
  Eigen::Index component(Index c, int comp) const { return offset(c) + comp; }

 private:
  int dim_ = 2;
  int rot_ = 1;
  std::size_t num_cells_ = 0;
};

/// Mesh, material and the reconstruction operators built on them. The strain
/// operator maps dofs to per-cell (e, kappa) blocks of length strain_size().
class Discretization {
 public:
  Discretization(Mesh mesh, Material material, const StencilOptions& opt = {})
      : mesh_(std::move(mesh)), material_(std::move(material)) {
    if (mesh_.dim() != material_.dim()) throw Error("discretization: mesh and material dimensions differ");
    R_ = FacetReconstruction::build(mesh_, opt);
    G_ = GradientReconstruction::build(mesh_, R_);
    dofs_ = DofMap(mesh_.dim(), mesh_.num_cells());
    build_strain_operator();
  }

  const Mesh& mesh() const { return mesh_; }
  const Material& material() const { return material_; }
  const FacetReconstruction& facet_operator() const { return R_; }
  const GradientReconstruction& gradient() const { return G_; }
  const DofMap& dofs() const { return dofs_; }
  int dim() const { return mesh_.dim(); }

  /// d*d strain entries then r*d curvature entries.
  int strain_size() const { return dim() * dim() + dofs_.rotation_dim() * dim(); }
  const SpMat& strain_operator() const { return B_; }

  /// Reconstructed value of component comp in cell c at x.
  double p1_value(Index c, int comp, const Vec& q, const Point& x) const {
    const auto& op = G_.cell(c);
    double v = q[dofs_.component(c, comp)];
    const Point dx = x - mesh_.cell(c).barycenter;
    for (std::size_t k = 0; k < op.cells.size(); ++k) v += op.weights[k].dot(dx) * q[dofs_.component(op.cells[k], comp)];
    return v;
  }

  /// Facet-reconstructed value of component comp on facet f.
  double facet_value(Index f, int comp, const Vec& q) const {
    const auto& s = R_.stencil(f);
    double v = 0.0;
    for (std::size_t k = 0; k < s.cells.size(); ++k) v += s.coefficients[k] * q[dofs_.component(s.cells[k], comp)];
    return v;
  }

  /// Sparse rows of P1 evaluation: coefficient list (dof, weight).
  std::vector<std::pair<Eigen::Index, double>> p1_row(Index c, int comp, const Point& x) const {
    std::vector<std::pair<Eigen::Index, double>> row;
    row.emplace_back(dofs_.component(c, comp), 1.0);
    const auto& op = G_.cell(c);
    const Point dx = x - mesh_.cell(c).barycenter;
    for (std::size_t k = 0; k < op.cells.size(); ++k) row.emplace_back(dofs_.component(op.cells[k], comp), op.weights[k].dot(dx));
    return row;
  }

 private:
  void build_strain_operator() {
    const int d = dim(), r = dofs_.rotation_dim(), ns = strain_size();
    std::vector<Triplet> t;
    for (Index c = 0; c < mesh_.num_cells(); ++c) {
      const auto& op = G_.cell(c);
      const int base = static_cast<int>(c) * ns;
      for (std::size_t k = 0; k < op.cells.size(); ++k) {
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            t.emplace_back(base + i * d + j, static_cast<int>(dofs_.u(op.cells[k], i)), op.weights[k][j]);
        for (int m = 0; m < r; ++m)
          for (int j = 0; j < d; ++j)
            t.emplace_back(base + d * d + m * d + j, static_cast<int>(dofs_.phi(op.cells[k], m)), op.weights[k][j]);
      }
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if (d == 2) {
            const double e = permutation(2, i, j);
            if (e != 0.0) t.emplace_back(base + i * d + j, static_cast<int>(dofs_.phi(c, 0)), e);
          } else {
            for (int m = 0; m < 3; ++m) {
              const double e = permutation(3, i, j, m);
              if (e != 0.0) t.emplace_back(base + i * d + j, static_cast<int>(dofs_.phi(c, m)), e);
            }
          }
        }
    }
    B_ = from_triplets(static_cast<Eigen::Index>(mesh_.num_cells()) * ns, dofs_.size(), t);
  }

  Mesh mesh_;
  Material material_;
  FacetReconstruction R_;
  GradientReconstruction G_;
  DofMap dofs_;
  SpMat B_;
};

/// Boundary data attached to one boundary tag. Components with a set mask are
/// imposed weakly (Nitsche); the remaining ones receive the traction/couple.
struct BoundaryCondition {
  std::array<bool, 3> fix_u{false, false, false};
  std::array<bool, 3> fix_phi{false, false, false};
  Field u_D = zero_field();
  Field phi_D = zero_field();
  Field traction = zero_field();
  Field couple = zero_field();

  bool any_fixed() const {
    for (int i = 0; i < 3; ++i)
      if (fix_u[static_cast<std::size_t>(i)] || fix_phi[static_cast<std::size_t>(i)]) return true;
    return false;
  }

  static BoundaryCondition clamped(Field u = zero_field(), Field phi = zero_field()) {
    BoundaryCondition bc;
    bc.fix_u = {true, true, true};
    bc.fix_phi = {true, true, true};
    bc.u_D = std::move(u);
    bc.phi_D = std::move(phi);
    return bc;
  }

  static BoundaryCondition free(Field g = zero_field(), Field m = zero_field()) {
    BoundaryCondition bc;
    bc.traction = std::move(g);
    bc.couple = std::move(m);
    return bc;
  }
};

using BoundaryConditions = std::map<std::string, BoundaryCondition>;

struct BodyLoads {
  Field force = zero_field();
  Field couple = zero_field();
};

/// Per-boundary-facet condition lookup; throws on untagged or uncovered facets.
inline std::vector<const BoundaryCondition*> facet_conditions(const Mesh& mesh, const BoundaryConditions& bcs) {
  std::vector<const BoundaryCondition*> out(mesh.num_facets(), nullptr);
  for (Index f = 0; f < mesh.num_facets(); ++f) {
    const Facet& F = mesh.facet(f);
    if (!F.is_boundary()) continue;
    if (F.tag.empty()) throw Error("untagged boundary facet " + std::to_string(f));
    auto it = bcs.find(F.tag);
    if (it == bcs.end()) throw Error("no boundary condition for tag '" + F.tag + "'");
    out[f] = &it->second;
  }
  return out;
}

/// 𝓕ᵇ_D / 𝓕ᵇ_N split: a facet is Dirichlet when any component is fixed.
inline FacetPartition partition_facets(const Mesh& mesh, const BoundaryConditions& bcs) {
  facet_conditions(mesh, bcs);  // coverage check
  return classify_facets(mesh, [&](const std::string& tag) { return bcs.at(tag).any_fixed(); });
}

namespace detail {

/// Per-cell block diagonal of the material tensors, times |c|.
inline SpMat material_weights(const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  const int ns = disc.strain_size(), d = disc.dim(), nC = d * d;
  const Mat& C = disc.material().C();
  const Mat& D = disc.material().D();
  std::vector<Triplet> t;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const int base = static_cast<int>(c) * ns;
    const double w = mesh.cell(c).measure;
    for (int i = 0; i < nC; ++i)
      for (int j = 0; j < nC; ++j)
        if (C(i, j) != 0.0) t.emplace_back(base + i, base + j, w * C(i, j));
    for (int i = 0; i < D.rows(); ++i)
      for (int j = 0; j < D.cols(); ++j)
        if (D(i, j) != 0.0) t.emplace_back(base + nC + i, base + nC + j, w * D(i, j));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.num_cells()) * ns;
  return from_triplets(n, n, t);
}

/// (d+r) x strain_size matrix contracting (sigma, mu) with n: (sigma n, mu n).
inline Mat normal_contraction(int d, int r, const Point& n) {
  Mat N = Mat::Zero(d + r, d * d + r * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) N(i, i * d + j) = n[j];
  for (int k = 0; k < r; ++k)
    for (int j = 0; j < d; ++j) N(d + k, d * d + k * d + j) = n[j];
  return N;
}

/// Dense (d+r) x ndof-local traction operator of cell c: rows (sigma n, mu n),
/// columns listed in `cols`.
inline Mat cell_traction(const Discretization& disc, Index c, const Point& n, std::vector<Eigen::Index>& cols) {
  const int d = disc.dim(), r = disc.dofs().rotation_dim(), ns = disc.strain_size();
  const Eigen::Index row0 = static_cast<Eigen::Index>(c) * ns;
  const SpMat& B = disc.strain_operator();
  // gather the cell's strain rows into a dense local block
  std::map<Eigen::Index, int> local;
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(ns));
  SpMat Bc = B.middleRows(row0, ns);
  for (int k = 0; k < Bc.outerSize(); ++k)
    for (SpMat::InnerIterator it(Bc, k); it; ++it) {
      auto [pos, inserted] = local.emplace(it.col(), static_cast<int>(local.size()));
      (void)inserted;
      rows[static_cast<std::size_t>(it.row())].emplace_back(pos->second, it.value());
    }
  Mat Bl = Mat::Zero(ns, static_cast<Eigen::Index>(local.size()));
  for (int i = 0; i < ns; ++i)
    for (auto [j, v] : rows[static_cast<std::size_t>(i)]) Bl(i, j) += v;
  cols.assign(local.size(), 0);
  for (auto [g, l] : local) cols[static_cast<std::size_t>(l)] = g;
  Mat law = Mat::Zero(ns, ns);
  law.topLeftCorner(d * d, d * d) = disc.material().C();
  law.bottomRightCorner(r * d, r * d) = disc.material().D();
  return normal_contraction(d, r, n) * law * Bl;
}

inline Vec component_mask(const BoundaryCondition& bc, int d, int r) {
  Vec m = Vec::Zero(d + r);
  for (int i = 0; i < d; ++i) m(i) = bc.fix_u[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
  for (int k = 0; k < r; ++k) m(d + k) = bc.fix_phi[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
  return m;
}

}  // namespace detail

/// Sum_c |c| [e_c(v):C:e_c(w) + kappa_c(v):D:kappa_c(w)].
inline SpMat assemble_elastic(const Discretization& disc) {
  const SpMat& B = disc.strain_operator();
  const SpMat W = detail::material_weights(disc);
  SpMat K = SpMat(B.transpose()) * (W * B);
  K.prune(0.0);
  return K;
}

/// Interior penalty on jumps of the P1 reconstruction, weighted by C and D
/// and scaled by 1/h_F.
inline SpMat assemble_inner_penalty(const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  const int d = disc.dim(), r = disc.dofs().rotation_dim(), nc = d + r;
  const Mat& C = disc.material().C();
  const Mat& D = disc.material().D();
  std::vector<Triplet> pt, wt;
  int row = 0;
  for (Index f : mesh.interior_facets()) {
    const Facet& F = mesh.facet(f);
    const Point& n = F.normal;
    Mat Tu = Mat::Zero(d * d, d), Tp = Mat::Zero(r * d, r);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) Tu(i * d + j, i) = n[j];
    for (int k = 0; k < r; ++k)
      for (int j = 0; j < d; ++j) Tp(k * d + j, k) = n[j];
    const Mat Wu = Tu.transpose() * C * Tu;
    const Mat Wp = Tp.transpose() * D * Tp;
    for (const auto& qp : facet_quadrature(mesh, F)) {
      const double s = qp.weight / F.diameter;
      for (int comp = 0; comp < nc; ++comp) {
        for (auto [col, v] : disc.p1_row(F.cells[0], comp, qp.x)) pt.emplace_back(row + comp, static_cast<int>(col), v);
        for (auto [col, v] : disc.p1_row(F.cells[1], comp, qp.x)) pt.emplace_back(row + comp, static_cast<int>(col), -v);
      }
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (Wu(i, j) != 0.0) wt.emplace_back(row + i, row + j, s * Wu(i, j));
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          if (Wp(i, j) != 0.0) wt.emplace_back(row + d + i, row + d + j, s * Wp(i, j));
      row += nc;
    }
  }
  const SpMat P = from_triplets(row, disc.dofs().size(), pt);
  const SpMat W = from_triplets(row, row, wt);
  SpMat K = SpMat(P.transpose()) * (W * P);
  K.prune(0.0);
  return K;
}

struct NitscheTerms {
  SpMat K_con;
  SpMat K_nsym;
};

/// Non-symmetric Nitsche matrices on the fixed components of Dirichlet facets.
/// K_con = -sum |F| R_F^T Pi T_c and K_nsym = +sum |F| T_c^T Pi R_F are
/// accumulated separately.
inline NitscheTerms assemble_nitsche(const Discretization& disc, const BoundaryConditions& bcs) {
  const Mesh& mesh = disc.mesh();
  const int d = disc.dim(), r = disc.dofs().rotation_dim(), nc = d + r;
  const auto conds = facet_conditions(mesh, bcs);
  std::vector<Triplet> con, nsym;
  for (Index f : mesh.boundary_facets()) {
    const BoundaryCondition& bc = *conds[f];
    if (!bc.any_fixed()) continue;
    const Facet& F = mesh.facet(f);
    const Index c = F.cells[0];
    std::vector<Eigen::Index> cols;
    const Mat T = detail::cell_traction(disc, c, F.normal, cols);
    const Vec mask = detail::component_mask(bc, d, r);
    const auto& st = disc.facet_operator().stencil(f);
    for (int comp = 0; comp < nc; ++comp) {
      if (mask(comp) == 0.0) continue;
      for (std::size_t k = 0; k < st.cells.size(); ++k) {
        const int rdof = static_cast<int>(disc.dofs().component(st.cells[k], comp));
        const double a = F.measure * st.coefficients[k];
        for (std::size_t j = 0; j < cols.size(); ++j) {
          const double v = T(comp, static_cast<Eigen::Index>(j));
          if (v == 0.0) continue;
          con.emplace_back(rdof, static_cast<int>(cols[j]), -a * v);
          nsym.emplace_back(static_cast<int>(cols[j]), rdof, a * v);
        }
      }
    }
  }
  const Eigen::Index n = disc.dofs().size();
  return {from_triplets(n, n, con), from_triplets(n, n, nsym)};
}

/// Right-hand side of the non-symmetric term: sum T_c^T Pi int_F (u_D, phi_D).
inline Vec assemble_nitsche_rhs(const Discretization& disc, const BoundaryConditions& bcs, double t = 0.0) {
  const Mesh& mesh = disc.mesh();
  const int d = disc.dim(), r = disc.dofs().rotation_dim(), nc = d + r;
  const auto conds = facet_conditions(mesh, bcs);
  Vec b = Vec::Zero(disc.dofs().size());
  for (Index f : mesh.boundary_facets()) {
    const BoundaryCondition& bc = *conds[f];
    if (!bc.any_fixed()) continue;
    const Facet& F = mesh.facet(f);
    Vec data = Vec::Zero(nc);
    for (const auto& qp : facet_quadrature(mesh, F)) {
      const Eigen::Vector3d u = bc.u_D(qp.x, t);
      const Eigen::Vector3d p = bc.phi_D(qp.x, t);
      for (int i = 0; i < d; ++i) data(i) += qp.weight * u[i];
      for (int k = 0; k < r; ++k) data(d + k) += qp.weight * p[k];
    }
    const Vec masked = data.cwiseProduct(detail::component_mask(bc, d, r));
    std::vector<Eigen::Index> cols;
    const Mat T = detail::cell_traction(disc, F.cells[0], F.normal, cols);
    const Vec contrib = T.transpose() * masked;
    for (std::size_t j = 0; j < cols.size(); ++j) b[cols[j]] += contrib[static_cast<Eigen::Index>(j)];
  }
  return b;
}

/// Lumped mass: rho|c| on displacement dofs, rho I |c| on rotation dofs.
inline Vec assemble_mass(const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  const DofMap& dm = disc.dofs();
  const double rho = disc.material().density(), I = disc.material().micro_inertia();
  Vec M(dm.size());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const double m = rho * mesh.cell(c).measure;
    for (int i = 0; i < dm.dim(); ++i) M[dm.u(c, i)] = m;
    for (int k = 0; k < dm.rotation_dim(); ++k) M[dm.phi(c, k)] = m * I;
  }
  return M;
}

/// Boundary damping (4G/h_F) |F| (u.v + l^2 phi.psi) on the fixed components
/// of Dirichlet facets, with the facet trace taken as the adjacent cell value.
/// `length` < 0 selects the characteristic length of the material.
inline SpMat assemble_damping(const Discretization& disc, const BoundaryConditions& bcs, double length = -1.0) {
  const Mesh& mesh = disc.mesh();
  const DofMap& dm = disc.dofs();
  const int d = dm.dim(), r = dm.rotation_dim();
  const double l = length >= 0.0 ? length : characteristic_length(disc.material());
  const double G = disc.material().shear_modulus();
  const auto conds = facet_conditions(mesh, bcs);
  std::vector<Triplet> t;
  for (Index f : mesh.boundary_facets()) {
    const BoundaryCondition& bc = *conds[f];
    if (!bc.any_fixed()) continue;
    const Facet& F = mesh.facet(f);
    const double w = 4.0 * G / F.diameter * F.measure;
    const Vec mask = detail::component_mask(bc, d, r);
    for (int i = 0; i < d; ++i)
      if (mask(i) != 0.0) t.emplace_back(static_cast<int>(dm.u(F.cells[0], i)), static_cast<int>(dm.u(F.cells[0], i)), w);
    for (int k = 0; k < r; ++k)
      if (mask(d + k) != 0.0)
        t.emplace_back(static_cast<int>(dm.phi(F.cells[0], k)), static_cast<int>(dm.phi(F.cells[0], k)), w * l * l);
  }
  return from_triplets(dm.size(), dm.size(), t);
}

/// Which discrete value a boundary traction is tested against.
/// FacetReconstruction uses R_F(v), the same facet value the gradient
/// reconstruction sees, so affine solutions with Neumann data are reproduced
/// exactly. AdjacentCell uses v_c of the cell owning the facet; it leaves an
/// O(1) stress defect in the loaded cell layer.
enum class NeumannTesting { FacetReconstruction, AdjacentCell };

/// Body loads integrated per cell plus traction/couple on the free
/// components of boundary facets.
inline Vec assemble_load(const Discretization& disc, const BodyLoads& loads, const BoundaryConditions& bcs,
                         double t = 0.0, NeumannTesting testing = NeumannTesting::FacetReconstruction) {
  const Mesh& mesh = disc.mesh();
  const DofMap& dm = disc.dofs();
  const int d = dm.dim(), r = dm.rotation_dim();
  Vec b = Vec::Zero(dm.size());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    for (const auto& qp : cell_quadrature(mesh, c)) {
      const Eigen::Vector3d f = loads.force(qp.x, t);
      const Eigen::Vector3d m = loads.couple(qp.x, t);
      for (int i = 0; i < d; ++i) b[dm.u(c, i)] += qp.weight * f[i];
      for (int k = 0; k < r; ++k) b[dm.phi(c, k)] += qp.weight * m[k];
    }
  }
  const auto conds = facet_conditions(mesh, bcs);
  for (Index f : mesh.boundary_facets()) {
    const BoundaryCondition& bc = *conds[f];
    const Facet& F = mesh.facet(f);
    const Vec free = Vec::Ones(d + r) - detail::component_mask(bc, d, r);
    std::vector<Index> cells{F.cells[0]};
    std::vector<double> weights{1.0};
    if (testing == NeumannTesting::FacetReconstruction) {
      cells = disc.facet_operator().stencil(f).cells;
      weights = disc.facet_operator().stencil(f).coefficients;
    }
    for (const auto& qp : facet_quadrature(mesh, F)) {
      const Eigen::Vector3d g = bc.traction(qp.x, t);
      const Eigen::Vector3d m = bc.couple(qp.x, t);
      for (std::size_t j = 0; j < cells.size(); ++j) {
        const double w = weights[j] * qp.weight;
        for (int i = 0; i < d; ++i) b[dm.u(cells[j], i)] += free(i) * w * g[i];
        for (int k = 0; k < r; ++k) b[dm.phi(cells[j], k)] += free(d + k) * w * m[k];
      }
    }
  }
  return b;
}

/// All assembled pieces of one problem.
struct SystemParts {
  SpMat K_elas;
  SpMat K_pen;
  SpMat K_con;
  SpMat K_nsym;
  Vec M;
  SpMat C_damp;
  Vec rhs_load;
  Vec rhs_nsym;
};

struct Problem {
  BoundaryConditions bcs;
  BodyLoads loads;
  /// Length used in the rotational damping weight; negative means material l.
  double damping_length = -1.0;
  NeumannTesting neumann = NeumannTesting::FacetReconstruction;
};

inline SystemParts assemble_system(const Discretization& disc, const Problem& pb, double t = 0.0) {
  SystemParts s;
  s.K_elas = assemble_elastic(disc);
  s.K_pen = assemble_inner_penalty(disc);
  auto nit = assemble_nitsche(disc, pb.bcs);
  s.K_con = std::move(nit.K_con);
  s.K_nsym = std::move(nit.K_nsym);
  s.M = assemble_mass(disc);
  s.C_damp = assemble_damping(disc, pb.bcs, pb.damping_length);
  s.rhs_load = assemble_load(disc, pb.loads, pb.bcs, t, pb.neumann);
  s.rhs_nsym = assemble_nitsche_rhs(disc, pb.bcs, t);
  return s;
}

struct LinearSystem {
  SpMat A;
  Vec b;
};

struct ComposeOptions {
  bool penalty = true;
};

/// A = K_elas + K_pen + K_con + K_nsym, b = rhs_load + rhs_nsym.
inline LinearSystem compose_system(const SystemParts& s, const ComposeOptions& opt = {}) {
  const Eigen::Index n = s.K_elas.rows();
  auto check = [n](const SpMat& m, const char* name) {
    if (m.rows() != n || m.cols() != n) throw Error(std::string("compose_system: dimension mismatch in ") + name);
  };
  check(s.K_elas, "K_elas");
  check(s.K_pen, "K_pen");
  check(s.K_con, "K_con");
  check(s.K_nsym, "K_nsym");
  if (s.rhs_load.size() != n || s.rhs_nsym.size() != n) throw Error("compose_system: dimension mismatch in rhs");
  LinearSystem ls;
  ls.A = s.K_elas + s.K_con + s.K_nsym;
  if (opt.penalty) ls.A += s.K_pen;
  ls.b = s.rhs_load + s.rhs_nsym;
  return ls;
}

inline void write_matrix_market(const SpMat& A, const std::string& path) {
  if (!Eigen::saveMarket(A, path)) throw Error("cannot write " + path);
}

inline void write_vector(const Vec& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i] << "\n";
}

}  // namespace cosserat_dem
