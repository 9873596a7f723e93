#pragma once

// Field, time-series and report emitters.

#include "cosserat_dem/cases.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cosserat_dem {

namespace detail {

inline int vtk_cell_type(int dim, std::size_t nv) {
  if (dim == 2) {
    if (nv == 3) return 5;  // VTK_TRIANGLE
    if (nv == 4) return 9;  // VTK_QUAD
    return 7;               // VTK_POLYGON
  }
  if (nv == 4) return 10;  // VTK_TETRA
  if (nv == 8) return 12;  // VTK_HEXAHEDRON
  if (nv == 6) return 13;  // VTK_WEDGE
  if (nv == 5) return 14;  // VTK_PYRAMID
  throw Error("VTK output: unsupported 3D cell with " + std::to_string(nv) + " vertices");
}

inline std::ofstream open_output(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << std::setprecision(12);
  return out;
}

}  // namespace detail

/// Legacy ASCII unstructured grid with cell data u, phi, sigma (d x d
/// row-major) and mu (r x d row-major).
inline void write_vtk(std::ostream& out, const Discretization& disc, const Vec& q, const StressField& s,
                      const std::string& title = "cosserat-dem") {
  const Mesh& m = disc.mesh();
  const int d = disc.dim(), r = disc.dofs().rotation_dim();
  const std::size_t nc = m.num_cells();
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << m.vertices().size() << " double\n";
  for (const Point& x : m.vertices()) out << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
  std::size_t total = 0;
  for (const Cell& c : m.cells()) total += c.vertices.size() + 1;
  out << "CELLS " << nc << ' ' << total << '\n';
  for (const Cell& c : m.cells()) {
    out << c.vertices.size();
    for (Index v : c.vertices) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << nc << '\n';
  for (const Cell& c : m.cells()) out << detail::vtk_cell_type(d, c.vertices.size()) << '\n';

  out << "CELL_DATA " << nc << "\nVECTORS u double\n";
  for (Index c = 0; c < nc; ++c) {
    for (int i = 0; i < 3; ++i) out << (i < d ? q[disc.dofs().u(c, i)] : 0.0) << (i < 2 ? ' ' : '\n');
  }
  if (r == 1) {
    out << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
    for (Index c = 0; c < nc; ++c) out << q[disc.dofs().phi(c, 0)] << '\n';
  } else {
    out << "VECTORS phi double\n";
    for (Index c = 0; c < nc; ++c)
      out << q[disc.dofs().phi(c, 0)] << ' ' << q[disc.dofs().phi(c, 1)] << ' ' << q[disc.dofs().phi(c, 2)] << '\n';
  }
  out << "FIELD tensors 2\n";
  out << "sigma " << d * d << ' ' << nc << " double\n";
  for (Index c = 0; c < nc; ++c) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out << s.sigma[c](i, j) << (i == d - 1 && j == d - 1 ? '\n' : ' ');
  }
  out << "mu " << r * d << ' ' << nc << " double\n";
  for (Index c = 0; c < nc; ++c) {
    for (int k = 0; k < r; ++k)
      for (int j = 0; j < d; ++j) out << s.mu[c](k, j) << (k == r - 1 && j == d - 1 ? '\n' : ' ');
  }
}

inline void write_vtk(const std::filesystem::path& p, const Discretization& disc, const Vec& q, const StressField& s) {
  auto out = detail::open_output(p);
  write_vtk(out, disc, q, s);
}

/// One row per cell: barycenter, u, phi and the stress components.
inline void write_cell_csv(std::ostream& out, const Discretization& disc, const Vec& q, const StressField& s) {
  static const char* axes = "xyz";
  const int d = disc.dim(), r = disc.dofs().rotation_dim();
  const auto comps = stress_components(d);
  out << "cell";
  for (int i = 0; i < d; ++i) out << ',' << axes[i];
  for (int i = 0; i < d; ++i) out << ",u_" << axes[i];
  for (int k = 0; k < r; ++k) out << (r == 1 ? std::string(",phi") : std::string(",phi_") + axes[k]);
  for (const auto& c : comps) out << ',' << c.name;
  out << '\n';
  for (Index c = 0; c < disc.mesh().num_cells(); ++c) {
    out << c;
    const Point& x = disc.mesh().cell(c).barycenter;
    for (int i = 0; i < d; ++i) out << ',' << x[i];
    for (int i = 0; i < d; ++i) out << ',' << q[disc.dofs().u(c, i)];
    for (int k = 0; k < r; ++k) out << ',' << q[disc.dofs().phi(c, k)];
    for (const auto& comp : comps) out << ',' << comp.get(s, c);
    out << '\n';
  }
}

inline void write_cell_csv(const std::filesystem::path& p, const Discretization& disc, const Vec& q,
                           const StressField& s) {
  auto out = detail::open_output(p);
  write_cell_csv(out, disc, q, s);
}

/// step, t and one column per probe, written as the run advances.
class TimeSeriesWriter {
 public:
  TimeSeriesWriter(const std::filesystem::path& p, std::vector<Probe> probes)
      : out_(detail::open_output(p)), probes_(std::move(probes)) {
    out_ << "step,t";
    for (const auto& pr : probes_) out_ << ',' << pr.name;
    out_ << '\n';
  }

  const std::vector<Probe>& probes() const { return probes_; }

  void bind(const Mesh& mesh) { bind_probes(mesh, probes_); }

  void record(const Discretization& disc, std::size_t step, const State& s) {
    out_ << step << ',' << s.t;
    for (const auto& pr : probes_) out_ << ',' << probe_value(disc, pr, s.q);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
  std::vector<Probe> probes_;
};

inline nlohmann::json report_json(const ErrorReport& r) {
  nlohmann::json j;
  j["case"] = r.case_name;
  j["cells"] = r.cells;
  j["dofs"] = r.dofs;
  j["relative_residual"] = r.residual;
  j["pass"] = r.pass();
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : r.components) {
    nlohmann::json e{{"name", c.name}, {"min", c.min}, {"max", c.max}};
    if (c.compared) {
      e["max_error"] = c.max_error;
      e["error_kind"] = c.relative ? "relative" : "absolute";
      e["tolerance"] = c.tolerance;
      e["pass"] = c.pass();
    }
    comps.push_back(e);
  }
  j["components"] = comps;
  if (r.l2_u) j["l2_error_u"] = *r.l2_u;
  if (r.l2_phi) j["l2_error_phi"] = *r.l2_phi;
  for (const auto& [k, v] : r.metrics) j["metrics"][k] = v;
  return j;
}

inline std::string report_text(const ErrorReport& r) {
  std::ostringstream o;
  o << std::setprecision(6);
  o << "case " << r.case_name << ": " << r.cells << " cells, " << r.dofs << " dofs, relative residual "
    << r.residual << '\n';
  o << std::left << std::setw(12) << "component" << std::setw(15) << "min" << std::setw(15) << "max"
    << std::setw(15) << "max error" << "tolerance\n";
  for (const auto& c : r.components) {
    o << std::setw(12) << c.name << std::setw(15) << c.min << std::setw(15) << c.max;
    if (c.compared) {
      std::ostringstream err;
      err << std::setprecision(4) << c.max_error << (c.relative ? " rel" : " abs");
      o << std::setw(15) << err.str() << c.tolerance << (c.pass() ? "" : "  FAIL");
    }
    o << '\n';
  }
  if (r.l2_u) o << "L2 error u " << *r.l2_u << ", phi " << *r.l2_phi << '\n';
  for (const auto& [k, v] : r.metrics) o << k << " = " << v << '\n';
  bool any = false;
  for (const auto& c : r.components) any = any || c.compared;
  if (any) o << (r.pass() ? "PASS" : "FAIL") << '\n';
  return o.str();
}

inline void write_report(const std::filesystem::path& dir, const ErrorReport& r) {
  auto txt = detail::open_output(dir / "report.txt");
  txt << report_text(r);
  auto js = detail::open_output(dir / "report.json");
  js << report_json(r).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Running a case with artifacts

struct Emit {
  bool vtk = true;
  bool csv = true;
  bool report = true;
};

struct ArtifactOptions {
  std::filesystem::path output_dir = "output";
  Emit emit;
  /// Dynamic runs: write a VTK snapshot every this many steps (0: final only).
  std::size_t snapshot_every = 0;
};

/// Static solve or Crank-Nicolson run of `spec` with its artifacts written to
/// the output directory. The report of a dynamic run describes the final state.
inline ErrorReport run_case(const CaseSpec& spec, const RunOptions& opt, const ArtifactOptions& art) {
  const auto& dir = art.output_dir;
  if (spec.mode == RunMode::Static) {
    const StaticResult res = run_static(spec, opt);
    if (art.emit.vtk) write_vtk(dir / (spec.name + ".vtk"), *res.disc, res.q, res.stress);
    if (art.emit.csv) write_cell_csv(dir / (spec.name + "_cells.csv"), *res.disc, res.q, res.stress);
    if (art.emit.report) write_report(dir, res.report);
    return res.report;
  }
  std::unique_ptr<TimeSeriesWriter> series;
  if (art.emit.csv) series = std::make_unique<TimeSeriesWriter>(dir / (spec.name + "_probes.csv"), spec.probes);
  const Discretization* disc = nullptr;
  auto on_ready = [&](const Discretization& d) {
    disc = &d;
    if (series) series->bind(d.mesh());
  };
  auto observe = [&](std::size_t step, const State& s) {
    if (series) series->record(*disc, step, s);
    if (art.emit.vtk && art.snapshot_every && step % art.snapshot_every == 0) {
      std::ostringstream name;
      name << spec.name << '_' << std::setw(6) << std::setfill('0') << step << ".vtk";
      write_vtk(dir / name.str(), *disc, s.q, stress_field(*disc, s.q));
    }
  };
  const DynamicResult res = run_dynamic(spec, opt, observe, on_ready);
  const StressField st = stress_field(*res.disc, res.final_state.q);
  ErrorReport rep = error_report(spec.name, *res.disc, st, spec.expected);
  rep.metrics.emplace_back("final_time", res.final_state.t);
  rep.metrics.emplace_back("time_step", res.dt);
  rep.metrics.emplace_back("steps", static_cast<double>(res.steps));
  if (spec.metrics) {
    for (auto& m : spec.metrics(*res.disc, st)) rep.metrics.push_back(std::move(m));
  }
  if (art.emit.vtk) write_vtk(dir / (spec.name + ".vtk"), *res.disc, res.final_state.q, st);
  if (art.emit.csv) write_cell_csv(dir / (spec.name + "_cells.csv"), *res.disc, res.final_state.q, st);
  if (art.emit.report) write_report(dir, rep);
  return rep;
}

}  // namespace cosserat_dem
