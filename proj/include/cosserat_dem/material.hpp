#pragma once

#include "cosserat_dem/core.hpp"

#include <cmath>
#include <string>
#include <variant>

namespace cosserat_dem {

/// Plane Cosserat law parametrised by the shear modulus G, Poisson ratio nu,
/// the coupling ratio a = G_c/G and the characteristic length l.
struct CosseratMaterial2D {
  double G = 1.0;
  double nu = 0.0;
  double a = 0.0;
  double l = 0.0;
  double rho = 1.0;
  double I = 1.0;

  double frak_a() const { return 2.0 * (1.0 - nu) / (1.0 - 2.0 * nu); }
  double frak_b() const { return 2.0 * nu / (1.0 - 2.0 * nu); }
};

/// Isotropic 3D Cosserat law.
struct CosseratMaterial3D {
  double K = 1.0;
  double G = 1.0;
  double Gc = 0.0;
  double L = 0.0;
  double M = 0.0;
  double Mc = 0.0;
  double rho = 1.0;
  double I = 1.0;

  static CosseratMaterial3D from_lame(double lambda, double G, double Gc, double L, double M, double Mc, double rho,
                                      double I) {
    return {lambda + 2.0 * G / 3.0, G, Gc, L, M, Mc, rho, I};
  }
};

/// Material tensors C and D as dense matrices acting on row-major flattened
/// tensors: strain e (d*d entries, index i*d + j) and curvature kappa (r*d
/// entries, index k*d + j with kappa_kj = d phi_k / dx_j).
class Material {
 public:
  Material() : Material(CosseratMaterial2D{}) {}

  explicit Material(const CosseratMaterial2D& m) : law_(m) {
    if (!(m.G > 0.0)) throw Error("material: G must be positive");
    if (!(m.nu < 0.5)) throw Error("material: nu must be below 0.5");
    if (m.a < 0.0 || m.l < 0.0) throw Error("material: a and l must be non-negative");
    if (!(m.rho > 0.0)) throw Error("material: rho must be positive");
    if (m.I < 0.0) throw Error("material: I must be non-negative");
    build();
  }

  explicit Material(const CosseratMaterial3D& m) : law_(m) {
    if (!(m.K > 0.0) || !(m.G > 0.0)) throw Error("material: K and G must be positive");
    if (m.Gc < 0.0 || m.L < 0.0 || m.M < 0.0 || m.Mc < 0.0) throw Error("material: Gc, L, M, Mc must be non-negative");
    if (!(m.rho > 0.0)) throw Error("material: rho must be positive");
    if (m.I < 0.0) throw Error("material: I must be non-negative");
    build();
  }

  int dim() const { return std::holds_alternative<CosseratMaterial2D>(law_) ? 2 : 3; }
  int rotation_dim() const { return rotation_components(dim()); }
  const Mat& C() const { return C_; }
  const Mat& D() const { return D_; }

  double shear_modulus() const {
    return std::visit([](const auto& m) { return m.G; }, law_);
  }
  double density() const {
    return std::visit([](const auto& m) { return m.rho; }, law_);
  }
  double micro_inertia() const {
    return std::visit([](const auto& m) { return m.I; }, law_);
  }

  const CosseratMaterial2D* as_2d() const { return std::get_if<CosseratMaterial2D>(&law_); }
  const CosseratMaterial3D* as_3d() const { return std::get_if<CosseratMaterial3D>(&law_); }

  Vec stress(const Vec& strain) const { return C_ * strain; }
  Vec couple_stress(const Vec& curvature) const { return D_ * curvature; }

 private:
  void build() {
    if (const auto* m = as_2d()) {
      // tabulated ordering (xx, yy, xy, yx) mapped onto row-major (xx, xy, yx, yy)
      const double A = m->frak_a(), B = m->frak_b(), G = m->G, a = m->a;
      C_ = Mat::Zero(4, 4);
      C_(0, 0) = G * A;
      C_(0, 3) = G * B;
      C_(3, 0) = G * B;
      C_(3, 3) = G * A;
      C_(1, 1) = G * (1.0 + a);
      C_(1, 2) = G * (1.0 - a);
      C_(2, 1) = G * (1.0 - a);
      C_(2, 2) = G * (1.0 + a);
      D_ = 4.0 * G * m->l * m->l * Mat::Identity(2, 2);
    } else {
      const auto& m3 = *as_3d();
      C_ = isotropic_3d(m3.K - 2.0 * m3.G / 3.0, m3.G, m3.Gc);
      D_ = isotropic_3d(m3.L - 2.0 * m3.M / 3.0, m3.M, m3.Mc);
    }
  }

  /// lambda tr(e) 1 + 2 mu Sym(e) + 2 mu_c Skew(e)
  static Mat isotropic_3d(double lambda, double mu, double mu_c) {
    Mat T = Mat::Zero(9, 9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        T(i * 3 + j, i * 3 + j) += mu + mu_c;
        T(i * 3 + j, j * 3 + i) += mu - mu_c;
        if (i == j)
          for (int k = 0; k < 3; ++k) T(i * 3 + i, k * 3 + k) += lambda;
      }
    return T;
  }

  std::variant<CosseratMaterial2D, CosseratMaterial3D> law_;
  Mat C_;
  Mat D_;
};

/// sigma for a 2D strain given in row-major order (xx, xy, yx, yy).
inline Eigen::Vector4d stress_2d(const CosseratMaterial2D& m, const Eigen::Vector4d& e) {
  return Material(m).C() * e;
}

inline Eigen::Vector2d couple_2d(const CosseratMaterial2D& m, const Eigen::Vector2d& kappa) {
  return 4.0 * m.G * m.l * m.l * kappa;
}

inline Eigen::Matrix3d stress_3d(const CosseratMaterial3D& m, const Eigen::Matrix3d& e) {
  const double tr = e.trace();
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d sym = 0.5 * (e + e.transpose());
  const Eigen::Matrix3d skew = 0.5 * (e - e.transpose());
  return m.K * tr * I + 2.0 * m.G * (sym - tr / 3.0 * I) + 2.0 * m.Gc * skew;
}

inline Eigen::Matrix3d couple_3d(const CosseratMaterial3D& m, const Eigen::Matrix3d& kappa) {
  const double tr = kappa.trace();
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d sym = 0.5 * (kappa + kappa.transpose());
  const Eigen::Matrix3d skew = 0.5 * (kappa - kappa.transpose());
  return m.L * tr * I + 2.0 * m.M * (sym - tr / 3.0 * I) + 2.0 * m.Mc * skew;
}

/// l = sqrt(max D_ijkl / max C_ijkl); zero when D vanishes.
inline double characteristic_length(const Mat& C, const Mat& D) {
  const double dmax = D.maxCoeff();
  if (!(dmax > 0.0)) return 0.0;
  return std::sqrt(dmax / C.maxCoeff());
}

inline double characteristic_length(const Material& m) { return characteristic_length(m.C(), m.D()); }

/// Strain e = grad u + eps.phi for one cell, from the displacement gradient
/// (d x d, grad_ij = d u_i / dx_j) and the cell rotation (r components).
inline Mat cosserat_strain(int dim, const Mat& grad_u, const Vec& phi) {
  Mat e = grad_u;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (dim == 2) {
        e(i, j) += permutation(2, i, j) * phi(0);
      } else {
        for (int k = 0; k < 3; ++k) e(i, j) += permutation(3, i, j, k) * phi(k);
      }
    }
  return e;
}

/// eps : sigma, the moment produced by a non-symmetric stress (scalar in 2D).
inline Vec stress_moment(int dim, const Mat& sigma) {
  if (dim == 2) {
    Vec m(1);
    m(0) = sigma(0, 1) - sigma(1, 0);
    return m;
  }
  Vec m = Vec::Zero(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m(i) += permutation(3, i, j, k) * sigma(j, k);
  return m;
}

}  // namespace cosserat_dem
