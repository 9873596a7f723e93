#pragma once

#include "cosserat_dem/dynamics.hpp"
#include "cosserat_dem/mesh_io.hpp"
#include "cosserat_dem/postprocess.hpp"
#include "cosserat_dem/solver.hpp"
#include "cosserat_dem/system.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#ifndef COSSERAT_DEM_DATA_DIR
#define COSSERAT_DEM_DATA_DIR "data"
#endif

namespace cosserat_dem {

/// Closed-form displacement and rotation of a validation problem.
struct ExactSolution {
  std::function<Eigen::Vector3d(const Point&)> u;
  std::function<Eigen::Vector3d(const Point&)> phi;
};

/// Expected value of one stress component, possibly position dependent.
struct ExpectedComponent {
  std::string name;
  std::function<double(const Point&)> value;
  /// Acceptance tolerance on the error reported for this component
  /// (relative, or absolute when the expected value is zero).
  double tolerance = 0.0;
};

enum class RunMode { Static, Dynamic };

struct CaseSpec {
  std::string name;
  std::string description;
  /// Mesh builder; the argument is the number of uniform refinements.
  std::function<Mesh(int refine)> make_mesh;
  Material material;
  Problem problem;
  RunMode mode = RunMode::Static;
  double T = 0.0;
  double dt = 0.0;
  std::optional<ExactSolution> exact;
  std::vector<ExpectedComponent> expected;
  /// Initial displacement/rotation for dynamics (sampled at barycenters).
  std::optional<ExactSolution> initial;
  /// Points recorded at every time step of a dynamic run.
  std::vector<Probe> probes;
  /// Case-specific scalar results appended to the report after a static solve.
  std::function<std::vector<std::pair<std::string, double>>(const Discretization&, const StressField&)> metrics;
};

// ---------------------------------------------------------------------------
// Stress components and error reports

struct StressComponent {
  std::string name;
  std::function<double(const StressField&, Index)> get;
};

inline std::vector<StressComponent> stress_components(int dim) {
  static const char* axes = "xyz";
  std::vector<StressComponent> out;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      out.push_back({std::string("sigma_") + axes[i] + axes[j],
                     [i, j](const StressField& s, Index c) { return s.sigma[c](i, j); }});
  if (dim == 2) {
    for (int j = 0; j < 2; ++j)
      out.push_back({std::string("mu_") + axes[j], [j](const StressField& s, Index c) { return s.mu[c](0, j); }});
  } else {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out.push_back({std::string("mu_") + axes[i] + axes[j],
                       [i, j](const StressField& s, Index c) { return s.mu[c](i, j); }});
  }
  return out;
}

struct ComponentError {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  bool compared = false;
  /// True when the expected value is nonzero somewhere and the error is relative.
  bool relative = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return !compared || max_error <= tolerance; }
};

struct ErrorReport {
  std::string case_name;
  std::size_t cells = 0;
  Eigen::Index dofs = 0;
  double residual = 0.0;
  std::vector<ComponentError> components;
  /// Relative L2 errors of u and phi over cell barycenters (exact solution only).
  std::optional<double> l2_u;
  std::optional<double> l2_phi;
  /// Named scalars such as a stress concentration factor.
  std::vector<std::pair<std::string, double>> metrics;

  const ComponentError& component(const std::string& name) const {
    for (const auto& c : components)
      if (c.name == name) return c;
    throw Error("report has no component " + name);
  }
  bool pass() const {
    for (const auto& c : components)
      if (!c.pass()) return false;
    return true;
  }
};

/// Min/max per component and errors against the expected table. Relative
/// error is |computed - expected| / |expected| cellwise; zero expected
/// values give absolute errors only.
inline ErrorReport error_report(const std::string& name, const Discretization& disc, const StressField& s,
                                const std::vector<ExpectedComponent>& expected) {
  ErrorReport r;
  r.case_name = name;
  r.cells = disc.mesh().num_cells();
  r.dofs = disc.dofs().size();
  for (const auto& comp : stress_components(disc.dim())) {
    ComponentError e;
    e.name = comp.name;
    e.min = std::numeric_limits<double>::infinity();
    e.max = -std::numeric_limits<double>::infinity();
    const ExpectedComponent* ex = nullptr;
    for (const auto& x : expected)
      if (x.name == comp.name) ex = &x;
    for (Index c = 0; c < disc.mesh().num_cells(); ++c) {
      const double v = comp.get(s, c);
      e.min = std::min(e.min, v);
      e.max = std::max(e.max, v);
      if (ex) {
        const double ref = ex->value(disc.mesh().cell(c).barycenter);
        if (ref != 0.0) e.relative = true;
      }
    }
    if (ex) {
      e.compared = true;
      e.tolerance = ex->tolerance;
      for (Index c = 0; c < disc.mesh().num_cells(); ++c) {
        const double v = comp.get(s, c);
        const double ref = ex->value(disc.mesh().cell(c).barycenter);
        const double err = e.relative ? std::abs(v - ref) / std::abs(ref) : std::abs(v - ref);
        e.max_error = std::max(e.max_error, err);
      }
    }
    r.components.push_back(e);
  }
  return r;
}

inline void add_field_errors(ErrorReport& r, const Discretization& disc, const Vec& q, const ExactSolution& ex) {
  const int d = disc.dim(), rr = disc.dofs().rotation_dim();
  double eu = 0, nu = 0, ep = 0, np = 0;
  for (Index c = 0; c < disc.mesh().num_cells(); ++c) {
    const Cell& cell = disc.mesh().cell(c);
    const Eigen::Vector3d u = ex.u(cell.barycenter), p = ex.phi(cell.barycenter);
    for (int i = 0; i < d; ++i) {
      eu += cell.measure * std::pow(q[disc.dofs().u(c, i)] - u[i], 2);
      nu += cell.measure * u[i] * u[i];
    }
    for (int k = 0; k < rr; ++k) {
      ep += cell.measure * std::pow(q[disc.dofs().phi(c, k)] - p[k], 2);
      np += cell.measure * p[k] * p[k];
    }
  }
  r.l2_u = nu > 0 ? std::sqrt(eu / nu) : std::sqrt(eu);
  r.l2_phi = np > 0 ? std::sqrt(ep / np) : std::sqrt(ep);
}

/// Dof vector sampling given fields at cell barycenters.
inline Vec sample_dofs(const Discretization& disc, const ExactSolution& f) {
  Vec q(disc.dofs().size());
  for (Index c = 0; c < disc.mesh().num_cells(); ++c) {
    const Point& x = disc.mesh().cell(c).barycenter;
    const Eigen::Vector3d u = f.u(x), p = f.phi(x);
    for (int i = 0; i < disc.dim(); ++i) q[disc.dofs().u(c, i)] = u[i];
    for (int k = 0; k < disc.dofs().rotation_dim(); ++k) q[disc.dofs().phi(c, k)] = p[k];
  }
  return q;
}

// ---------------------------------------------------------------------------
// Running a case

struct RunOptions {
  SolverOptions solver;
  int refine = 0;
  bool penalty = true;
  /// Overrides the case time step when positive.
  double dt = 0.0;
  /// Overrides the case number of steps when nonzero (dt * steps need not be T).
  std::size_t steps = 0;
};

struct StaticResult {
  std::unique_ptr<Discretization> disc;
  Vec q;
  StressField stress;
  SolveInfo info;
  ErrorReport report;
};

inline std::unique_ptr<Discretization> discretize(const CaseSpec& spec, int refine = 0) {
  if (!spec.make_mesh) throw Error("case '" + spec.name + "' has no mesh");
  return std::make_unique<Discretization>(spec.make_mesh(refine), spec.material);
}

inline StaticResult run_static(const CaseSpec& spec, const RunOptions& opt = {}) {
  try {
    StaticResult res;
    res.disc = discretize(spec, opt.refine);
    const Discretization& disc = *res.disc;
    const SystemParts parts = assemble_system(disc, spec.problem);
    ComposeOptions co;
    co.penalty = opt.penalty;
    const LinearSystem ls = compose_system(parts, co);
    res.q = solve_static(ls.A, ls.b, opt.solver, &res.info);
    res.stress = stress_field(disc, res.q);
    res.report = error_report(spec.name, disc, res.stress, spec.expected);
    res.report.residual = res.info.relative_residual;
    if (spec.exact) add_field_errors(res.report, disc, res.q, *spec.exact);
    if (spec.metrics) res.report.metrics = spec.metrics(disc, res.stress);
    return res;
  } catch (const Error& e) {
    throw Error("case '" + spec.name + "': " + e.what());
  }
}

/// L(t) = rhs_load(t) + rhs_nsym(t).
inline LoadFunction load_function(const Discretization& disc, const Problem& pb) {
  return [&disc, &pb](double t) { return Vec(assemble_load(disc, pb.loads, pb.bcs, t, pb.neumann) + assemble_nitsche_rhs(disc, pb.bcs, t)); };
}

struct DynamicResult {
  std::unique_ptr<Discretization> disc;
  State final_state;
  double dt = 0.0;
  std::size_t steps = 0;
};

/// Crank-Nicolson run of a dynamic case; `observe` sees every state.
inline DynamicResult run_dynamic(const CaseSpec& spec, const RunOptions& opt, const Observer& observe,
                                 const std::function<void(const Discretization&)>& on_ready = {}) {
  try {
    DynamicResult res;
    res.disc = discretize(spec, opt.refine);
    const Discretization& disc = *res.disc;
    if (on_ready) on_ready(disc);
    const SystemParts parts = assemble_system(disc, spec.problem);
    const LinearSystem ls = compose_system(parts);
    res.dt = opt.dt > 0.0 ? opt.dt : (spec.dt > 0.0 ? spec.dt : spec.T / 2000.0);
    if (!(res.dt > 0.0)) throw Error("dynamic run needs T or dt");
    res.steps = opt.steps ? opt.steps : static_cast<std::size_t>(std::llround(spec.T / res.dt));
    State s0;
    s0.q = spec.initial ? sample_dofs(disc, *spec.initial) : Vec::Zero(disc.dofs().size());
    s0.qd = Vec::Zero(disc.dofs().size());
    res.final_state = crank_nicolson_run(ls.A, parts.M, parts.C_damp, load_function(disc, spec.problem), s0,
                                         {res.dt, res.steps}, observe, opt.solver);
    return res;
  } catch (const Error& e) {
    throw Error("case '" + spec.name + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Patch tests on [-0.12, 0.12] x [0, 0.12]

struct PatchParams {
  double G = 1e3;
  double nu = 0.25;
  double a = 0.5;
  double l = 0.1;
  std::size_t nx = 50;
  std::size_t ny = 25;
};

/// Exact fields u = ((x + y/2)/G, (x + y)/G) with rotations 1/(4G),
/// -1/(4G) and (1/4 - x + y)/G for tests 1, 2 and 3. Loads follow from the
/// equilibrium equations f = -div sigma and c = sigma:eps - div mu.
inline CaseSpec patch_case(int which, const PatchParams& p = {}) {
  if (which < 1 || which > 3) throw Error("patch test index must be 1, 2 or 3");
  CaseSpec s;
  s.name = "patch" + std::to_string(which);
  s.material = Material(CosseratMaterial2D{p.G, p.nu, p.a, p.l, 1.0, 1.0});
  const double G = p.G;
  s.make_mesh = [p](int refine) {
    const std::size_t k = std::size_t{1} << refine;
    GridOptions o;
    o.origin = Point(-0.12, 0.0, 0.0);
    return generate_rect_mesh(0.24, 0.12, p.nx * k, p.ny * k, o);
  };
  ExactSolution ex;
  ex.u = [G](const Point& x) { return Eigen::Vector3d((x.x() + 0.5 * x.y()) / G, (x.x() + x.y()) / G, 0.0); };
  switch (which) {
    case 1: ex.phi = [G](const Point&) { return Eigen::Vector3d(0.25 / G, 0, 0); }; break;
    case 2: ex.phi = [G](const Point&) { return Eigen::Vector3d(-0.25 / G, 0, 0); }; break;
    default: ex.phi = [G](const Point& x) { return Eigen::Vector3d((0.25 - x.x() + x.y()) / G, 0, 0); }; break;
  }
  s.exact = ex;
  s.problem.bcs["left"] = s.problem.bcs["right"] = s.problem.bcs["bottom"] = s.problem.bcs["top"] =
      BoundaryCondition::clamped([ex](const Point& x, double) { return ex.u(x); },
                                 [ex](const Point& x, double) { return ex.phi(x); });
  auto cst = [](double v) { return [v](const Point&) { return v; }; };
  const double l2 = 4.0 * p.l * p.l;
  // sigma_xx = sigma_yy = G (frak_a + frak_b) / G; sigma_xy = 1.25 + G phi, sigma_yx = 1.25 - G phi
  const double sd = 2.0 / (1.0 - 2.0 * p.nu);
  const double stol = which == 1 ? 1e-8 : 0.05;
  s.expected = {{"sigma_xx", cst(sd), stol}, {"sigma_yy", cst(sd), stol}};
  if (which == 1) {
    s.description = "patch test 1: constant symmetric stress, no loads";
    s.expected.push_back({"sigma_xy", cst(1.5), stol});
    s.expected.push_back({"sigma_yx", cst(1.5), stol});
    s.expected.push_back({"mu_x", cst(0.0), 1e-10 * G});
    s.expected.push_back({"mu_y", cst(0.0), 1e-10 * G});
  } else if (which == 2) {
    s.description = "patch test 2: constant non-symmetric stress balanced by a body couple";
    // sigma:eps = sigma_xy - sigma_yx = -1
    s.problem.loads.couple = constant_field(Eigen::Vector3d(-1.0, 0, 0));
    s.expected.push_back({"sigma_xy", cst(1.0), stol});
    s.expected.push_back({"sigma_yx", cst(2.0), stol});
    s.expected.push_back({"mu_x", cst(0.0), 6e-2});
    s.expected.push_back({"mu_y", cst(0.0), 6e-2});
  } else {
    s.description = "patch test 3: affine rotation, body force and body couple";
    s.problem.loads.force = constant_field(Eigen::Vector3d(-1.0, -1.0, 0.0));
    s.problem.loads.couple = [](const Point& x, double) { return Eigen::Vector3d(2.0 * (x.y() - x.x()), 0, 0); };
    s.expected.push_back({"sigma_xy", [](const Point& x) { return 1.5 - (x.x() - x.y()); }, 0.10});
    s.expected.push_back({"sigma_yx", [](const Point& x) { return 1.5 + (x.x() - x.y()); }, 0.10});
    s.expected.push_back({"mu_x", cst(-l2), 0.10});
    s.expected.push_back({"mu_y", cst(l2), 0.10});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Plate with a hole

struct PlateEntry {
  /// Varied parameter: a (tests 1-2) or r/l (test 3).
  double parameter;
  double analytical;
};

struct PlateTable {
  int test;
  double radius;  // m
  double a;       // fixed a (test 3)
  double r_over_l;  // fixed r/l (tests 1-2)
  std::vector<PlateEntry> entries;
};

/// Reference maximal hoop stress / Sigma.
inline const std::vector<PlateTable>& plate_tables() {
  static const std::vector<PlateTable> t{
      {1, 0.216e-3, 0.0, 1.063, {{0.0, 3.000}, {0.0667, 2.849}, {0.3333, 2.555}, {1.2857, 2.287}, {4.2632, 2.158}}},
      {2, 0.216e-3, 0.0, 10.63, {{0.0, 3.000}, {0.0667, 2.956}, {0.3333, 2.935}, {1.2857, 2.927}, {4.2632, 2.923}}},
      {3,
       0.864e-3,
       0.3333,
       0.0,
       {{1.0, 2.549}, {2.0, 2.641}, {3.0, 2.719}, {4.0, 2.779}, {6.0, 2.857}, {8.0, 2.902}, {10.0, 2.929}}}};
  return t;
}

inline std::string plate_mesh_path(double radius, bool coarse) {
  const std::string r = radius < 0.5e-3 ? "r0216" : "r0864";
  return std::string(COSSERAT_DEM_DATA_DIR) + "/meshes/plate_" + r + (coarse ? "_coarse" : "") + ".json";
}

/// Maximum over hole-adjacent cells of t.sigma.t / Sigma, t = (-sin, cos) of
/// the barycenter polar angle.
inline double stress_concentration(const Discretization& disc, const StressField& s, double Sigma = 1.0,
                                   const std::string& hole_tag = "hole") {
  const auto facets = disc.mesh().facets_with_tag(hole_tag);
  if (facets.empty()) throw Error("stress_concentration: no facets tagged '" + hole_tag + "'");
  double best = -std::numeric_limits<double>::infinity();
  for (Index f : facets) {
    const Index c = disc.mesh().facet(f).cells[0];
    const Point& x = disc.mesh().cell(c).barycenter;
    const double th = std::atan2(x.y(), x.x());
    Eigen::Vector2d t(-std::sin(th), std::cos(th));
    best = std::max(best, t.dot(s.sigma[c].topLeftCorner(2, 2) * t) / Sigma);
  }
  return best;
}

/// Quarter plate with symmetry on left (u_x = 0, phi = 0) and bottom
/// (u_y = 0, phi = 0), traction (0, Sigma) on top, free right side and hole.
inline CaseSpec plate_hole_case(double a, double r_over_l, double radius, const std::string& mesh_path,
                                double Sigma = 1.0) {
  CaseSpec s;
  s.name = "plate_hole";
  s.description = "quarter plate with a circular hole under uniaxial traction";
  const double l = radius / r_over_l;
  s.material = Material(CosseratMaterial2D{1e3, 0.3, a, l, 1.0, 1.0});
  s.make_mesh = [mesh_path](int refine) {
    if (refine != 0) throw Error("plate_hole meshes are read from file and cannot be refined");
    return load_mesh(mesh_path);
  };
  BoundaryCondition left, bottom;
  left.fix_u = {true, false, false};
  left.fix_phi = {true, false, false};
  bottom.fix_u = {false, true, false};
  bottom.fix_phi = {true, false, false};
  s.problem.bcs["left"] = left;
  s.problem.bcs["bottom"] = bottom;
  s.problem.bcs["top"] = BoundaryCondition::free(constant_field(Eigen::Vector3d(0.0, Sigma, 0.0)));
  s.problem.bcs["right"] = BoundaryCondition::free();
  s.problem.bcs["hole"] = BoundaryCondition::free();
  s.metrics = [Sigma](const Discretization& disc, const StressField& st) {
    return std::vector<std::pair<std::string, double>>{{"stress_concentration", stress_concentration(disc, st, Sigma)}};
  };
  return s;
}

struct PlateResult {
  int test = 0;
  double a = 0.0;
  double r_over_l = 0.0;
  double scf = 0.0;
  double analytical = 0.0;
  /// (scf - analytical) / analytical
  double error = 0.0;
  double seconds = 0.0;
};

/// Runs every entry of `tables`; entries are independent and spread over
/// `threads` workers, each with its own discretization and factorization.
inline std::vector<PlateResult> plate_sweep(const std::vector<PlateTable>& tables, bool coarse, unsigned threads = 1,
                                            const RunOptions& opt = {}) {
  std::vector<PlateResult> out;
  for (const auto& t : tables) {
    for (const auto& e : t.entries) {
      PlateResult r;
      r.test = t.test;
      r.a = t.test == 3 ? t.a : e.parameter;
      r.r_over_l = t.test == 3 ? e.parameter : t.r_over_l;
      r.analytical = e.analytical;
      out.push_back(r);
    }
  }
  std::vector<double> radius;
  for (const auto& t : tables)
    for (std::size_t k = 0; k < t.entries.size(); ++k) radius.push_back(t.radius);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::string first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < out.size(); i = next++) {
      try {
        PlateResult& r = out[i];
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = run_static(plate_hole_case(r.a, r.r_over_l, radius[i], plate_mesh_path(radius[i], coarse)), opt);
        r.scf = res.report.metrics.at(0).second;
        r.error = (r.scf - r.analytical) / r.analytical;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < std::max(1u, threads); ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (!first_error.empty()) throw Error("plate sweep: " + first_error);
  return out;
}

// ---------------------------------------------------------------------------
// Boundary layer

struct BoundaryLayerParams {
  double H = 1e-3;
  double G = 1e10;
  double nu = 0.0;
  double a = 2.0;
  double l = 5e-5;
  double u_top = -0.1;
  /// Top rotation, 0.01 H with H in metres.
  double phi_top = 0.01 * 1e-3;
  std::size_t nx = 10;
  std::size_t ny = 50;
};

/// Square layer sheared by its top face. The mirror sides fix the tangential
/// displacement u_2 and leave u_1, phi free.
inline CaseSpec boundary_layer_case(const BoundaryLayerParams& p = {}) {
  CaseSpec s;
  s.name = "boundary_layer";
  s.description = "Cosserat boundary layer in a sheared square";
  s.material = Material(CosseratMaterial2D{p.G, p.nu, p.a, p.l, 1.0, 1.0});
  s.make_mesh = [p](int refine) {
    const std::size_t k = std::size_t{1} << refine;
    return generate_rect_mesh(p.H, p.H, p.nx * k, p.ny * k);
  };
  BoundaryCondition bottom, top, side;
  bottom.fix_u = {true, false, false};
  bottom.fix_phi = {true, false, false};
  top = bottom;
  top.u_D = constant_field(Eigen::Vector3d(p.u_top, 0, 0));
  top.phi_D = constant_field(Eigen::Vector3d(p.phi_top, 0, 0));
  side.fix_u = {false, true, false};
  s.problem.bcs["bottom"] = bottom;
  s.problem.bcs["top"] = top;
  s.problem.bcs["left"] = side;
  s.problem.bcs["right"] = side;
  return s;
}

// ---------------------------------------------------------------------------
// Beam in dynamic flexion

struct BeamParams {
  double length = 1e-3;
  double side = 4e-5;
  std::array<std::size_t, 3> n{20, 2, 2};
  double T = 6.3e-5;
  double Tc = 3.2e-8;
};

inline CosseratMaterial3D beam_material() {
  const double G = 1e10, l = 1e-5;
  return {16.67e9, G, 5e9, G * l * l, 2.5 * G * l * l, 2.5 * G * l * l, 2500.0, 0.4 * l * l};
}

/// Young modulus 9KG/(3K+G).
inline double young_modulus(const CosseratMaterial3D& m) { return 9.0 * m.K * m.G / (3.0 * m.K + m.G); }

/// Cantilever clamped at x = 0, ramped vertical (-y) traction at x = L
/// released at T_c.
inline CaseSpec beam_flexion_case(const BeamParams& p = {}) {
  CaseSpec s;
  s.name = "beam_flexion";
  s.description = "3D cantilever released after a ramped tip traction";
  const CosseratMaterial3D m = beam_material();
  s.material = Material(m);
  s.mode = RunMode::Dynamic;
  s.T = p.T;
  s.dt = p.T / 2000.0;
  s.make_mesh = [p](int refine) {
    const std::size_t k = std::size_t{1} << refine;
    return generate_box_mesh(Point(p.length, p.side, p.side), {p.n[0] * k, p.n[1] * k, p.n[2] * k});
  };
  const double E = young_modulus(m), Tc = p.Tc;
  s.problem.bcs["xmin"] = BoundaryCondition::clamped();
  s.problem.bcs["xmax"] = BoundaryCondition::free([E, Tc](const Point&, double t) {
    const double g = t <= Tc ? -t * E * 1e-6 / Tc : 0.0;
    return Eigen::Vector3d(0.0, g, 0.0);
  });
  for (const char* tag : {"ymin", "ymax", "zmin", "zmax"}) s.problem.bcs[tag] = BoundaryCondition::free();
  s.probes = {{"tip_u_y", Point(p.length, 0.5 * p.side, 0.5 * p.side), 1}};
  return s;
}

inline Point beam_tip(const BeamParams& p = {}) { return Point(p.length, 0.5 * p.side, 0.5 * p.side); }

// ---------------------------------------------------------------------------
// Lamb problem at desk scale

/// Ricker wavelet (1 - 2 pi^2 f^2 (t - t0)^2) exp(-pi^2 f^2 (t - t0)^2).
inline double ricker(double fc, double t0, double t) {
  const double a = M_PI * M_PI * fc * fc * (t - t0) * (t - t0);
  return (1.0 - 2.0 * a) * std::exp(-a);
}

/// Vertical body force A(t) w(x), w = 2/(pi R^2) (1 - |x - x_s|^2/R^2) on the
/// disk of radius R, which integrates to one.
inline Field ricker_source(double fc, double t0, const Point& center, double radius, double amplitude = 1.0) {
  if (!(fc > 0.0)) throw Error("ricker_source: central frequency must be positive");
  if (!(radius > 0.0)) throw Error("ricker_source: radius must be positive");
  return [=](const Point& x, double t) {
    const double rho2 = (x - center).squaredNorm() / (radius * radius);
    if (rho2 >= 1.0) return Eigen::Vector3d::Zero().eval();
    const double w = 2.0 / (M_PI * radius * radius) * (1.0 - rho2);
    return Eigen::Vector3d(0.0, amplitude * ricker(fc, t0, t) * w, 0.0);
  };
}

struct LambParams {
  double width = 2000.0;
  double depth = 1000.0;
  std::size_t nx = 100;
  std::size_t ny = 50;
  double G = 7.52e9;
  double lambda = 3.76e9;
  double rho = 2500.0;
  double fc = 14.5;
  double source_depth = 100.0;
  double source_radius = 30.0;
  double T = 0.5;
  double dt = 1e-4;
};

inline CosseratMaterial2D lamb_material(const LambParams& p) {
  const double h = p.width / static_cast<double>(p.nx);
  const double l = h / std::sqrt(2.0);
  const double nu = p.lambda / (2.0 * (p.lambda + p.G));
  return {p.G, nu, 1.0, l, p.rho, l * l / 6.0};
}

inline Point lamb_source(const LambParams& p) { return Point(0.5 * p.width, p.depth - p.source_depth, 0.0); }

/// Vertical-displacement probes: a ray going down from the source at
/// `ray` distances, and the free surface at horizontal `surface` offsets.
struct LambProbes {
  std::vector<double> ray{200.0, 300.0, 400.0, 500.0};
  std::vector<double> surface{200.0, 350.0, 500.0};
};

inline std::vector<Probe> lamb_probes(const LambParams& p, const LambProbes& layout = {}) {
  const Point src = lamb_source(p);
  std::vector<Probe> out;
  for (double d : layout.ray) out.push_back({"ray_" + std::to_string(static_cast<int>(d)), src - Point(0, d, 0), 1});
  for (double d : layout.surface)
    out.push_back({"surface_" + std::to_string(static_cast<int>(d)), Point(src.x() + d, p.depth, 0), 1});
  return out;
}

/// Traction-free rectangle, top face at y = depth, Ricker source below it.
inline CaseSpec lamb_case(const LambParams& p = {}) {
  CaseSpec s;
  s.name = "lamb_desk";
  s.description = "Lamb problem, 2 km x 1 km, Ricker point source";
  s.material = Material(lamb_material(p));
  s.mode = RunMode::Dynamic;
  s.T = p.T;
  s.dt = p.dt;
  s.make_mesh = [p](int refine) {
    const std::size_t k = std::size_t{1} << refine;
    return generate_rect_mesh(p.width, p.depth, p.nx * k, p.ny * k);
  };
  for (const char* tag : {"left", "right", "bottom", "top"}) s.problem.bcs[tag] = BoundaryCondition::free();
  s.problem.loads.force = ricker_source(p.fc, 1.0 / p.fc, lamb_source(p), p.source_radius);
  s.probes = lamb_probes(p);
  return s;
}

/// First time the signal exceeds `fraction` of its peak magnitude, linearly
/// interpolated between samples.
inline double first_arrival(const std::vector<double>& t, const std::vector<double>& v, double fraction = 0.05) {
  if (t.size() != v.size() || t.empty()) throw Error("first_arrival: size mismatch");
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (!(peak > 0.0)) throw Error("no arrival: signal is identically zero");
  const double thr = fraction * peak;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= thr) {
      if (i == 0) return t[0];
      const double a = std::abs(v[i - 1]), b = std::abs(v[i]);
      return t[i - 1] + (thr - a) / (b - a) * (t[i] - t[i - 1]);
    }
  }
  throw Error("no arrival detected");
}

inline double peak_time(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() != v.size() || t.empty()) throw Error("peak_time: size mismatch");
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  if (v[k] == 0.0) throw Error("no arrival: signal is identically zero");
  return t[k];
}

/// Least-squares slope of distance against time.
inline double fit_speed(const std::vector<double>& distance, const std::vector<double>& time) {
  const std::size_t n = distance.size();
  if (n < 2 || time.size() != n) throw Error("wave speed needs at least two probes");
  double md = 0, mt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    md += distance[i] / static_cast<double>(n);
    mt += time[i] / static_cast<double>(n);
  }
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (time[i] - mt) * (distance[i] - md);
    den += (time[i] - mt) * (time[i] - mt);
  }
  if (!(den > 0.0)) throw Error("wave speed: arrivals are simultaneous");
  return num / den;
}

/// Speed from first-arrival picks on probe traces at given source distances.
inline double wave_speed_probe(const std::vector<double>& t, const std::vector<std::vector<double>>& traces,
                               const std::vector<double>& distance, double fraction = 0.05) {
  if (traces.size() != distance.size()) throw Error("wave_speed_probe: one distance per trace");
  std::vector<double> arrivals;
  for (const auto& tr : traces) arrivals.push_back(first_arrival(t, tr, fraction));
  return fit_speed(distance, arrivals);
}

// ---------------------------------------------------------------------------
// Registry

inline std::vector<std::string> builtin_case_names() {
  return {"patch1", "patch2", "patch3", "plate_hole", "boundary_layer", "beam_flexion", "lamb_desk"};
}

/// Default instance of a builtin case. plate_hole is the a = 0.3333 entry of
/// the first table on the coarse shipped mesh.
inline CaseSpec builtin_case(const std::string& name) {
  if (name == "patch1") return patch_case(1);
  if (name == "patch2") return patch_case(2);
  if (name == "patch3") return patch_case(3);
  if (name == "plate_hole") {
    const auto& t = plate_tables()[0];
    const PlateEntry e = t.entries[2];
    CaseSpec s = plate_hole_case(e.parameter, t.r_over_l, t.radius, plate_mesh_path(t.radius, true));
    s.metrics = [inner = s.metrics, e](const Discretization& disc, const StressField& st) {
      auto m = inner(disc, st);
      m.emplace_back("analytical", e.analytical);
      m.emplace_back("relative_error", std::abs(m.front().second - e.analytical) / e.analytical);
      return m;
    };
    return s;
  }
  if (name == "boundary_layer") return boundary_layer_case();
  if (name == "beam_flexion") return beam_flexion_case();
  if (name == "lamb_desk") return lamb_case();
  throw Error("unknown builtin case '" + name + "'");
}

}  // namespace cosserat_dem
