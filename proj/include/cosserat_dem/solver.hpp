#pragma once

#include "cosserat_dem/core.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#ifdef COSSERAT_DEM_USE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace cosserat_dem {

enum class SolverKind { Direct, Krylov };

inline SolverKind solver_kind_from_string(const std::string& s) {
  if (s == "direct") return SolverKind::Direct;
  if (s == "krylov") return SolverKind::Krylov;
  throw Error("unknown solver '" + s + "' (expected direct or krylov)");
}

struct SolverOptions {
  SolverKind kind = SolverKind::Direct;
  /// Relative residual target of the Krylov solver.
  double tolerance = 1e-10;
  /// 0 selects 10 n.
  Eigen::Index max_iterations = 0;
};

struct SolveInfo {
  double relative_residual = 0.0;
  Eigen::Index iterations = 0;
};

#ifdef COSSERAT_DEM_USE_UMFPACK
using DirectLU = Eigen::UmfPackLU<SpMat>;
inline constexpr const char* kDirectBackend = "umfpack";
#else
using DirectLU = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;
inline constexpr const char* kDirectBackend = "sparselu";
#endif

namespace detail {
inline std::unique_ptr<DirectLU> factorize(const SpMat& A) {
  auto lu = std::make_unique<DirectLU>();
#ifdef COSSERAT_DEM_USE_UMFPACK
  // Refinement steps nearly triple the cost of a solve; residuals here are
  // already at round-off and are reported by LinearSolver::info().
  lu->umfpackControl()(UMFPACK_IRSTEP) = 0;
#endif
  lu->compute(A);
  if (lu->info() != Eigen::Success) throw Error("singular factorization");
  return lu;
}
}  // namespace detail

/// Factorizes (direct) or preconditions (Krylov) A once; solves many rhs.
class LinearSolver {
 public:
  LinearSolver(const SpMat& A, const SolverOptions& opt = {}) : A_(A), opt_(opt) {
    if (A.rows() != A.cols()) throw Error("linear solver: matrix is not square");
    A_.makeCompressed();
    if (opt.kind == SolverKind::Direct) {
      lu_ = detail::factorize(A_);
    } else {
      krylov_ = std::make_unique<Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>>>();
      krylov_->preconditioner().setDroptol(1e-4);
      krylov_->preconditioner().setFillfactor(20);
      krylov_->compute(A_);
      if (krylov_->info() != Eigen::Success) throw Error("incomplete LU preconditioner failed");
      krylov_->setTolerance(opt.tolerance);
      krylov_->setMaxIterations(opt.max_iterations > 0 ? opt.max_iterations : 10 * A_.rows());
    }
  }

  const SpMat& matrix() const { return A_; }
  bool is_direct() const { return lu_ != nullptr; }
  const SolveInfo& info() const { return info_; }

  Vec solve(const Vec& b) const {
    if (b.size() != A_.rows()) throw Error("linear solver: rhs size mismatch");
    Vec x;
    if (lu_) {
      x = lu_->solve(b);
      if (lu_->info() != Eigen::Success) throw Error("direct solve failed");
      info_.iterations = 1;
    } else {
      x = krylov_->solve(b);
      info_.iterations = krylov_->iterations();
      if (krylov_->info() != Eigen::Success)
        throw Error("Krylov solver did not converge within " + std::to_string(krylov_->maxIterations()) +
                    " iterations (residual " + std::to_string(krylov_->error()) + ")");
    }
    const double bn = b.norm();
    info_.relative_residual = bn > 0.0 ? (A_ * x - b).norm() / bn : (A_ * x).norm();
    if (!x.allFinite()) throw Error("linear solve produced non-finite values");
    return x;
  }

  /// Solves A^T x = b; requires the direct backend. A^T is factorized on first use.
  Vec solve_transpose(const Vec& b) const {
    if (!lu_) throw Error("transpose solve requires the direct solver");
    if (b.size() != A_.rows()) throw Error("linear solver: rhs size mismatch");
    if (!lu_t_) {
      // the UMFPACK wrapper keeps pointers into the factorized matrix
      At_ = A_.transpose();
      At_.makeCompressed();
      lu_t_ = detail::factorize(At_);
    }
    Vec x = lu_t_->solve(b);
    if (lu_t_->info() != Eigen::Success) throw Error("direct transpose solve failed");
    return x;
  }

 private:
  SpMat A_;
  SolverOptions opt_;
  std::unique_ptr<DirectLU> lu_;
  mutable SpMat At_;
  mutable std::unique_ptr<DirectLU> lu_t_;
  std::unique_ptr<Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>>> krylov_;
  mutable SolveInfo info_;
};

inline Vec solve_static(const SpMat& A, const Vec& b, const SolverOptions& opt = {}, SolveInfo* info = nullptr) {
  LinearSolver s(A, opt);
  Vec x = s.solve(b);
  if (info) *info = s.info();
  return x;
}

struct ConditionEstimate {
  double condition = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  int iterations_max = 0;
  int iterations_min = 0;
  /// Relative change of the last iterate for each estimate.
  double residual_max = 0.0;
  double residual_min = 0.0;
  bool converged = false;
};

struct ConditionOptions {
  int max_iterations = 200;
  double stagnation = 1e-4;
  unsigned seed = 12345;
};

/// 2-norm condition number: power iteration on A^T A for sigma_max, inverse
/// iteration through an LU factorization for sigma_min.
inline ConditionEstimate condition_estimate(const SpMat& A, const ConditionOptions& opt = {}) {
  const Eigen::Index n = A.rows();
  ConditionEstimate est;
  if (n == 0) throw Error("condition_estimate: empty matrix");
  auto start = [&]() {
    Vec x(n);
    unsigned s = opt.seed;
    for (Eigen::Index i = 0; i < n; ++i) {
      s = s * 1664525u + 1013904223u;
      x[i] = 0.5 + static_cast<double>(s >> 8) / static_cast<double>(1u << 24);
    }
    return Vec(x / x.norm());
  };
  auto iterate = [&](auto&& apply, int& iters, double& residual) {
    Vec x = start();
    double lambda = 0.0;
    bool ok = false;
    for (iters = 1; iters <= opt.max_iterations; ++iters) {
      Vec y = apply(x);
      const double next = y.norm();
      residual = lambda > 0.0 ? std::abs(next - lambda) / next : 1.0;
      lambda = next;
      if (!(next > 0.0)) break;
      x = y / next;
      if (residual < opt.stagnation) {
        ok = true;
        break;
      }
    }
    iters = std::min(iters, opt.max_iterations);
    return std::pair<double, bool>(lambda, ok);
  };
  const SpMat At = A.transpose();
  auto [lmax, okmax] = iterate([&](const Vec& x) { return Vec(At * (A * x)); }, est.iterations_max, est.residual_max);
  est.sigma_max = std::sqrt(lmax);
  LinearSolver lu(A);
  auto [lmin_inv, okmin] = iterate([&](const Vec& x) { return lu.solve(lu.solve_transpose(x)); }, est.iterations_min,
                                   est.residual_min);
  est.sigma_min = 1.0 / std::sqrt(lmin_inv);
  est.condition = est.sigma_max / est.sigma_min;
  est.converged = okmax && okmin;
  return est;
}

}  // namespace cosserat_dem
