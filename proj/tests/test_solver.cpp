#include <cosserat_dem/cases.hpp>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cosserat_dem;
using testing_support::random_vector;
using testing_support::unit_material;

namespace {

SpMat diagonal(std::initializer_list<double> d) {
  SpMat A(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  int i = 0;
  for (double v : d) {
    A.insert(i, i) = v;
    ++i;
  }
  return A;
}

PatchParams small_patch() { return {1e3, 0.25, 0.5, 0.1, 12, 6}; }

/// Max error of the Crank-Nicolson single-dof oscillator over [0, T].
double oscillator_error(double dt, double T) {
  const double m = 2.0, k = 3.0;
  const SpMat A = diagonal({k});
  const Vec M = Vec::Constant(1, m);
  State s;
  s.q = Vec::Constant(1, 1.0);
  double err = 0.0;
  crank_nicolson_run(A, M, SpMat(1, 1), [](double) { return Vec::Zero(1); }, s,
                     {dt, static_cast<std::size_t>(std::llround(T / dt))},
                     [&](std::size_t, const State& st) { err = std::max(err, std::abs(st.q[0] - oracles::oscillator(m, k, 1.0, st.t))); });
  return err;
}

}  // namespace

TEST(StaticSolve, PatchOneResidualAndStresses) {
  const auto res = run_static(patch_case(1, small_patch()));
  EXPECT_LT(res.info.relative_residual, 1e-10);
  for (Index c = 0; c < res.disc->mesh().num_cells(); ++c) {
    EXPECT_NEAR(res.stress.sigma[c](0, 0), 4.0, 1e-8 * 4.0);
    EXPECT_NEAR(res.stress.sigma[c](0, 1), 1.5, 1e-8 * 1.5);
    EXPECT_NEAR(res.stress.sigma[c](1, 0), 1.5, 1e-8 * 1.5);
    EXPECT_NEAR(res.stress.sigma[c](1, 1), 4.0, 1e-8 * 4.0);
  }
}

TEST(StaticSolve, ZeroDataGivesZeroSolution) {
  CaseSpec spec = patch_case(1, small_patch());
  for (auto& [tag, bc] : spec.problem.bcs) bc = BoundaryCondition::clamped();
  const auto res = run_static(spec);
  EXPECT_EQ(res.q.norm(), 0.0);
}

TEST(StaticSolve, KrylovAgreesWithDirect) {
  const CaseSpec spec = patch_case(3, {1e3, 0.25, 0.5, 0.1, 8, 4});
  RunOptions opt;
  const auto direct = run_static(spec, opt);
  opt.solver.kind = SolverKind::Krylov;
  const auto krylov = run_static(spec, opt);
  EXPECT_LT(krylov.info.relative_residual, 1e-9);
  EXPECT_LT((krylov.q - direct.q).norm(), 1e-7 * direct.q.norm());
}

TEST(StaticSolve, Errors) {
  SpMat Z(3, 3);
  Z.insert(0, 0) = 1.0;
  EXPECT_THROW(solve_static(Z, Vec::Ones(3)), Error);
  SpMat R(2, 3);
  EXPECT_THROW(LinearSolver{R}, Error);
  EXPECT_THROW(solver_kind_from_string("cholesky"), Error);
  EXPECT_EQ(solver_kind_from_string("krylov"), SolverKind::Krylov);

  const auto disc = discretize(patch_case(3, {1e3, 0.25, 0.5, 0.1, 8, 4}));
  const auto spec = patch_case(3);
  const LinearSystem ls = compose_system(assemble_system(*disc, spec.problem));
  SolverOptions opt;
  opt.kind = SolverKind::Krylov;
  opt.max_iterations = 1;
  opt.tolerance = 1e-14;
  EXPECT_THROW(solve_static(ls.A, ls.b, opt), Error);
}

TEST(StaticSolve, TransposeSolve) {
  SpMat A(2, 2);
  A.insert(0, 0) = 2.0;
  A.insert(0, 1) = 1.0;
  A.insert(1, 1) = 3.0;
  const LinearSolver s(A);
  const Vec b = Vec::Ones(2);
  const Vec x = s.solve_transpose(b);
  EXPECT_LT((SpMat(A.transpose()) * x - b).norm(), 1e-15);
  SolverOptions k;
  k.kind = SolverKind::Krylov;
  EXPECT_THROW(LinearSolver(A, k).solve_transpose(b), Error);
}

TEST(Condition, IdentityAndDiagonal) {
  EXPECT_NEAR(condition_estimate(diagonal({1, 1, 1, 1})).condition, 1.0, 1e-12);
  const auto d = condition_estimate(diagonal({1, 10}));
  EXPECT_NEAR(d.condition, 10.0, 1e-3);
  EXPECT_TRUE(d.converged);
}

TEST(Condition, PenaltyDoesNotChangeOrderOfMagnitude) {
  const CaseSpec spec = patch_case(1, small_patch());
  const auto disc = discretize(spec);
  const SystemParts parts = assemble_system(*disc, spec.problem);
  ComposeOptions without;
  without.penalty = false;
  const double with_pen = condition_estimate(compose_system(parts).A).condition;
  const double no_pen = condition_estimate(compose_system(parts, without).A).condition;
  EXPECT_LT(std::max(with_pen, no_pen) / std::min(with_pen, no_pen), 10.0);
}

TEST(CrankNicolson, ZeroDataStaysZero) {
  const Discretization disc(generate_rect_mesh(1, 1, 3, 3), unit_material(2));
  Problem pb;
  pb.bcs["left"] = BoundaryCondition::clamped();
  for (const char* t : {"right", "top", "bottom"}) pb.bcs[t] = BoundaryCondition::free();
  const SystemParts p = assemble_system(disc, pb);
  const LinearSystem ls = compose_system(p);
  const State s = crank_nicolson_run(ls.A, p.M, p.C_damp, [&](double) { return Vec::Zero(ls.b.size()); }, {}, {0.01, 20});
  EXPECT_EQ(s.q.norm(), 0.0);
  EXPECT_EQ(s.qd.norm(), 0.0);
  EXPECT_NEAR(s.t, 0.2, 1e-14);
}

TEST(CrankNicolson, SecondOrderOnHarmonicOscillator) {
  const double T = 10.0;
  const double e1 = oscillator_error(0.1, T), e2 = oscillator_error(0.05, T), e3 = oscillator_error(0.025, T);
  EXPECT_GT(e1 / e2, 3.4);
  EXPECT_LT(e1 / e2, 4.6);
  EXPECT_GT(e2 / e3, 3.4);
  EXPECT_LT(e2 / e3, 4.6);
}

TEST(CrankNicolson, EnergyConservedWithoutDampingOrLoads) {
  const Discretization disc(generate_rect_mesh(1, 1, 10, 10), unit_material(2));
  Problem pb;
  for (const char* t : {"left", "right", "top", "bottom"}) pb.bcs[t] = BoundaryCondition::free();
  const SystemParts p = assemble_system(disc, pb);
  const LinearSystem ls = compose_system(p);
  const SpMat K = p.K_elas + p.K_pen;
  State s;
  s.q = 1e-3 * random_vector(ls.b.size(), 2);
  const double E0 = discrete_energy(p.M, K, {0, s.q, Vec::Zero(s.q.size()), {}});
  double drift = 0.0;
  crank_nicolson_run(ls.A, p.M, p.C_damp, [&](double) { return Vec::Zero(ls.b.size()); }, s, {1e-3, 1000},
                     [&](std::size_t, const State& st) { drift = std::max(drift, std::abs(discrete_energy(p.M, K, st) - E0) / E0); });
  EXPECT_LT(drift, 1e-6);
}

TEST(CrankNicolson, DampingDissipates) {
  const Discretization disc(generate_rect_mesh(1, 1, 4, 4), unit_material(2));
  Problem pb;
  pb.bcs["left"] = pb.bcs["right"] = pb.bcs["top"] = pb.bcs["bottom"] = BoundaryCondition::clamped();
  const SystemParts p = assemble_system(disc, pb);
  const LinearSystem ls = compose_system(p);
  State s;
  s.q = Vec::Zero(ls.b.size());
  s.qd = random_vector(ls.b.size(), 4);
  const double E0 = discrete_energy(p.M, p.K_elas + p.K_pen, s);
  const State end = crank_nicolson_run(ls.A, p.M, p.C_damp, [&](double) { return Vec::Zero(ls.b.size()); }, s, {1e-2, 300});
  EXPECT_LT(discrete_energy(p.M, p.K_elas + p.K_pen, end), E0);
  EXPECT_TRUE(end.q.allFinite());
}

TEST(CrankNicolson, ExplicitDampingDissipatesAtSmallStep) {
  const Discretization disc(generate_rect_mesh(1, 1, 4, 4), unit_material(2));
  Problem pb;
  pb.bcs["left"] = pb.bcs["right"] = pb.bcs["top"] = pb.bcs["bottom"] = BoundaryCondition::clamped();
  const SystemParts p = assemble_system(disc, pb);
  const LinearSystem ls = compose_system(p);
  State s;
  s.q = Vec::Zero(ls.b.size());
  s.qd = random_vector(ls.b.size(), 4);
  const double E0 = discrete_energy(p.M, p.K_elas + p.K_pen, s);
  TimeGrid grid{1e-4, 3000, DampingTreatment::Explicit};
  const State end = crank_nicolson_run(ls.A, p.M, p.C_damp, [&](double) { return Vec::Zero(ls.b.size()); }, s, grid);
  EXPECT_LT(discrete_energy(p.M, p.K_elas + p.K_pen, end), E0);
}

TEST(CrankNicolson, SecondOrderOnDampedOscillator) {
  const double m = 2.0, c = 0.6, k = 3.0, T = 10.0;
  const SpMat K = diagonal({k}), C = diagonal({c});
  double prev = 0.0;
  for (const double dt : {0.1, 0.05, 0.025}) {
    State s;
    s.q = Vec::Ones(1);
    const auto steps = static_cast<std::size_t>(std::lround(T / dt));
    const State end = crank_nicolson_run(K, Vec::Constant(1, m), C, [](double) { return Vec::Zero(1); }, s, {dt, steps});
    const double err = std::abs(end.q[0] - oracles::damped_oscillator(m, c, k, 1.0, T));
    if (prev > 0.0) {
      EXPECT_NEAR(prev / err, 4.0, 0.5);
    }
    prev = err;
  }
}

TEST(CrankNicolson, InvalidInputs) {
  const SpMat A = diagonal({1.0});
  const auto zero = [](double) { return Vec::Zero(1); };
  EXPECT_THROW(crank_nicolson_run(A, Vec::Ones(1), SpMat(1, 1), zero, {}, {0.0, 1}), Error);
  EXPECT_THROW(crank_nicolson_run(A, Vec::Zero(1), SpMat(1, 1), zero, {}, {0.1, 1}), Error);
  EXPECT_THROW(crank_nicolson_run(A, Vec::Ones(2), SpMat(1, 1), zero, {}, {0.1, 1}), Error);
}

TEST(DemPost, UniformStressFacetForcesAndActionReaction) {
  const auto res = run_static(patch_case(1, small_patch()));
  const Discretization& disc = *res.disc;
  const FacetLoadSet L = dem_post(disc, res.q, res.stress);
  Mat sigma(2, 2);
  sigma << 4.0, 1.5, 1.5, 4.0;
  ASSERT_EQ(L.interior.size(), disc.mesh().interior_facets().size());
  for (std::size_t k = 0; k < L.interior.size(); ++k) {
    const Facet& F = disc.mesh().facet(L.interior[k]);
    const Vec expected = F.measure * sigma * F.normal.head(2);
    EXPECT_LT((L.force[k] - expected).norm(), 1e-8 * expected.norm() + 1e-14);
  }
  // action-reaction: accumulating +force on cells[0] and -force on cells[1] cancels globally
  const auto bal = cell_balance(disc, L);
  Vec total = Vec::Zero(2);
  for (const Vec& v : bal) total += v;
  EXPECT_LT(total.norm(), 1e-12);
  // interior cells of a uniform-stress field are in exact balance
  for (Index c = 0; c < disc.mesh().num_cells(); ++c) {
    bool interior = true;
    for (Index f : disc.mesh().cell(c).facets) interior = interior && !disc.mesh().facet(f).is_boundary();
    if (interior) {
      EXPECT_LT(bal[c].norm(), 1e-8 * sigma.norm() * disc.mesh().cell(c).diameter);
    }
  }
}

TEST(DemPost, BalanceResidualDecreasesWithMeshSize) {
  // non-uniform stress with body force; residual is O(h) relative to facet forces
  std::vector<double> ratios;
  for (std::size_t n : {6, 12, 24}) {
    const CaseSpec spec = patch_case(3, {1e3, 0.25, 0.5, 0.1, 2 * n, n});
    const auto res = run_static(spec);
    const FacetLoadSet L = dem_post(*res.disc, res.q, res.stress);
    const auto bal = cell_balance(*res.disc, L, spec.problem.loads);
    double worst = 0.0, scale = 0.0;
    for (const Vec& f : L.force) scale = std::max(scale, f.norm());
    const Mesh& m = res.disc->mesh();
    for (Index c = 0; c < m.num_cells(); ++c) {
      bool interior = true;
      for (Index f : m.cell(c).facets) interior = interior && !m.facet(f).is_boundary();
      if (interior) worst = std::max(worst, bal[c].norm());
    }
    ratios.push_back(worst / scale);
  }
  EXPECT_LT(ratios[1], ratios[0]);
  EXPECT_LT(ratios[2], ratios[1]);
}

TEST(DemPost, BoundaryDiagnosticsAndMoments) {
  const auto res = run_static(patch_case(2, small_patch()));
  const FacetLoadSet L = dem_post(*res.disc, res.q);
  EXPECT_EQ(L.boundary.size(), res.disc->mesh().boundary_facets().size());
  for (const Vec& g : L.boundary_gap) EXPECT_EQ(g.size(), 3);
  // eps:sigma = sigma_xy - sigma_yx = -1 in every cell
  for (Index c = 0; c < res.disc->mesh().num_cells(); ++c)
    EXPECT_NEAR(L.moment[c][0], -res.disc->mesh().cell(c).measure, 1e-9);
}

TEST(StressField, ZeroAndLinearity) {
  const Discretization disc(testing_support::tet_mesh(2, 0.2), unit_material(3));
  const Eigen::Index n = disc.dofs().size();
  const StressField z = stress_field(disc, Vec::Zero(n));
  for (const Mat& s : z.sigma) EXPECT_EQ(s.norm(), 0.0);
  const Vec a = random_vector(n, 1), b = random_vector(n, 2);
  const StressField sa = stress_field(disc, a), sb = stress_field(disc, b), sab = stress_field(disc, Vec(2.0 * a - b));
  for (std::size_t c = 0; c < sa.sigma.size(); ++c) {
    EXPECT_LT((sab.sigma[c] - (2.0 * sa.sigma[c] - sb.sigma[c])).norm(), 1e-12 * (1.0 + sab.sigma[c].norm()));
    EXPECT_LT((sab.mu[c] - (2.0 * sa.mu[c] - sb.mu[c])).norm(), 1e-12 * (1.0 + sab.mu[c].norm()));
  }
  EXPECT_THROW(stress_field(disc, Vec::Zero(3)), Error);
}

TEST(StressField, PatchThreeCoupleStress) {
  const auto res = run_static(patch_case(3));
  for (Index c = 0; c < res.disc->mesh().num_cells(); ++c) {
    EXPECT_NEAR(res.stress.mu[c](0, 0), -0.04, 0.004);
    EXPECT_NEAR(res.stress.mu[c](0, 1), 0.04, 0.004);
  }
}

TEST(Probes, LocateAndEvaluateAffineField) {
  const Discretization disc(testing_support::square_mesh(6, 0.2), unit_material(2));
  const Mat A = (Mat(2, 2) << 0.3, -0.2, 0.1, 0.5).finished();
  const Vec q = testing_support::affine_dofs(disc, A, Vec::Zero(2), Mat::Zero(1, 2), Vec::Zero(1));
  std::vector<Probe> probes{{"a", Point(0.55, 0.1, 0), 0}, {"b", Point(1.05, 0.61, 0), 1}};
  bind_probes(disc.mesh(), probes);
  for (const auto& p : probes) {
    ASSERT_NE(p.cell, kNoCell);
    const Vec exact = A * p.x.head(2);
    EXPECT_NEAR(probe_value(disc, p, q), exact[p.component], 1e-12);
  }
  Probe unbound{"c", Point::Zero(), 0};
  EXPECT_THROW(probe_value(disc, unbound, q), Error);
}
