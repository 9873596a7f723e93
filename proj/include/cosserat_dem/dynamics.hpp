#pragma once

#include "cosserat_dem/solver.hpp"

#include <functional>
#include <string>

namespace cosserat_dem {

struct State {
  double t = 0.0;
  Vec q;
  Vec qd;
  Vec qdd;
};

/// Right-hand side L(t) of the semi-discrete system M q'' + C q' + A q = L(t).
using LoadFunction = std::function<Vec(double t)>;
/// Called after the initial state (step 0) and after every step.
using Observer = std::function<void(std::size_t step, const State&)>;

/// Where the damping force is evaluated. Explicit uses C q'^n and is only
/// stable while dt C / M stays small; Implicit uses the trapezoidal average
/// C (q'^n + q'^{n+1}) / 2 and is unconditionally stable.
enum class DampingTreatment { Implicit, Explicit };

struct TimeGrid {
  double dt = 0.0;
  std::size_t steps = 0;
  DampingTreatment damping = DampingTreatment::Implicit;
};

/// Crank-Nicolson (average acceleration Newmark) integration. Keff =
/// (4/dt^2) M + A (+ (2/dt) C when damping is implicit) is factorized once.
inline State crank_nicolson_run(const SpMat& A, const Vec& M, const SpMat& C, const LoadFunction& load, State s,
                                const TimeGrid& grid, const Observer& observe = {}, const SolverOptions& solver = {}) {
  const Eigen::Index n = A.rows();
  if (!(grid.dt > 0.0)) throw Error("crank_nicolson_run: time step must be positive");
  if (M.size() != n || (M.array() <= 0.0).any()) throw Error("crank_nicolson_run: mass must be positive with matching size");
  if (C.rows() != n || C.cols() != n) throw Error("crank_nicolson_run: damping size mismatch");
  if (s.q.size() == 0) s.q = Vec::Zero(n);
  if (s.qd.size() == 0) s.qd = Vec::Zero(n);
  if (s.q.size() != n || s.qd.size() != n) throw Error("crank_nicolson_run: initial state size mismatch");

  const double dt = grid.dt;
  const double a0 = 4.0 / (dt * dt);
  s.qdd = (load(s.t) - C * s.qd - A * s.q).cwiseQuotient(M);
  if (observe) observe(0, s);

  const bool implicit = grid.damping == DampingTreatment::Implicit;
  SpMat K = implicit ? SpMat(A + (2.0 / dt) * C) : A;
  for (Eigen::Index i = 0; i < n; ++i) K.coeffRef(i, i) += a0 * M[i];
  const LinearSolver keff(K, solver);

  const double t0 = s.t;
  for (std::size_t step = 1; step <= grid.steps; ++step) {
    const double t1 = t0 + static_cast<double>(step) * dt;
    // q'^{n+1} = (2/dt)(q^{n+1} - q^n) - q'^n under the trapezoidal rule.
    const Vec damp = implicit ? Vec(C * ((2.0 / dt) * s.q + s.qd)) : Vec(-(C * s.qd));
    const Vec rhs = load(t1) + damp + M.cwiseProduct(a0 * s.q + (4.0 / dt) * s.qd + s.qdd);
    Vec q1;
    try {
      q1 = keff.solve(rhs);
    } catch (const Error& e) {
      throw Error("time step " + std::to_string(step) + ": " + e.what());
    }
    const Vec qdd1 = a0 * (q1 - s.q - dt * s.qd) - s.qdd;
    s.qd += 0.5 * dt * (s.qdd + qdd1);
    s.qdd = qdd1;
    s.q = std::move(q1);
    s.t = t1;
    if (observe) observe(step, s);
  }
  return s;
}

/// 1/2 q'^T M q' + 1/2 q^T K q.
inline double discrete_energy(const Vec& M, const SpMat& K, const State& s) {
  return 0.5 * s.qd.dot(M.cwiseProduct(s.qd)) + 0.5 * s.q.dot(K * s.q);
}

}  // namespace cosserat_dem
