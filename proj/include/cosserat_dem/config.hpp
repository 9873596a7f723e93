#pragma once

// JSON run configuration. The schema is documented in README.md; samples
// live in configs/.

#include "cosserat_dem/io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

namespace cosserat_dem {

struct RunConfig {
  CaseSpec spec;
  RunOptions run;
  ArtifactOptions artifacts;
};

namespace config_detail {

using json = nlohmann::json;

struct Context {
  std::string where;
  [[noreturn]] void fail(const std::string& msg) const { throw Error("config " + where + ": " + msg); }
  Context at(const std::string& key) const { return {where + "." + key}; }
};

inline void check_keys(const json& j, const Context& ctx, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) ctx.fail("expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) ctx.fail("unknown key '" + k + "'");
}

inline double number(const json& j, const Context& ctx) {
  if (!j.is_number()) ctx.fail("expected a number");
  return j.get<double>();
}

inline double number_or(const json& j, const char* key, double fallback, const Context& ctx) {
  return j.contains(key) ? number(j[key], ctx.at(key)) : fallback;
}

inline Point point(const json& j, const Context& ctx) {
  if (!j.is_array() || j.empty() || j.size() > 3) ctx.fail("expected a coordinate array of 1 to 3 numbers");
  Point p = Point::Zero();
  for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<Eigen::Index>(i)] = number(j[i], ctx);
  return p;
}

/// c + x X + y Y + z Z + t T, given as a number or {"c","x","y","z","t"}.
using Scalar = std::function<double(const Point&, double)>;

inline Scalar affine(const json& j, const Context& ctx) {
  if (j.is_number()) {
    const double c = j.get<double>();
    return [c](const Point&, double) { return c; };
  }
  check_keys(j, ctx, {"c", "x", "y", "z", "t"});
  const double c = number_or(j, "c", 0.0, ctx), x = number_or(j, "x", 0.0, ctx), y = number_or(j, "y", 0.0, ctx),
               z = number_or(j, "z", 0.0, ctx), t = number_or(j, "t", 0.0, ctx);
  return [=](const Point& p, double s) { return c + x * p.x() + y * p.y() + z * p.z() + t * s; };
}

/// Components array (a bare value is the first component), optionally wrapped
/// as {"value", "envelope", "support"}.
inline Field field(const json& j, int dim, const Context& ctx) {
  if (j.is_object() && j.contains("value")) {
    check_keys(j, ctx, {"value", "envelope", "support"});
    Field base = field(j["value"], dim, ctx.at("value"));
    std::function<double(double)> env = [](double) { return 1.0; };
    if (j.contains("envelope")) {
      const json& e = j["envelope"];
      const Context ec = ctx.at("envelope");
      if (!e.is_object() || !e.contains("type")) ec.fail("needs a type");
      const std::string type = e["type"].get<std::string>();
      if (type == "ramp") {
        check_keys(e, ec, {"type", "until"});
        const double until = number(e.value("until", json()), ec.at("until"));
        if (!(until > 0.0)) ec.fail("ramp duration must be positive");
        env = [until](double t) { return t <= until ? t / until : 0.0; };
      } else if (type == "ricker") {
        check_keys(e, ec, {"type", "fc", "t0"});
        const double fc = number(e.value("fc", json()), ec.at("fc"));
        if (!(fc > 0.0)) ec.fail("central frequency must be positive");
        const double t0 = number_or(e, "t0", 1.0 / fc, ec);
        env = [fc, t0](double t) { return ricker(fc, t0, t); };
      } else {
        ec.fail("unknown envelope type '" + type + "'");
      }
    }
    std::function<double(const Point&)> w = [](const Point&) { return 1.0; };
    if (j.contains("support")) {
      const json& s = j["support"];
      const Context sc = ctx.at("support");
      check_keys(s, sc, {"center", "radius"});
      const Point c = point(s.value("center", json()), sc.at("center"));
      const double R = number(s.value("radius", json()), sc.at("radius"));
      if (!(R > 0.0)) sc.fail("radius must be positive");
      // parabolic bump of unit integral
      const double norm = dim == 2 ? 2.0 / (M_PI * R * R) : 15.0 / (8.0 * M_PI * R * R * R);
      w = [c, R, norm](const Point& x) {
        const double r2 = (x - c).squaredNorm() / (R * R);
        return r2 < 1.0 ? norm * (1.0 - r2) : 0.0;
      };
    }
    return [base, env, w](const Point& x, double t) { return Eigen::Vector3d(env(t) * w(x) * base(x, t)); };
  }
  std::vector<Scalar> comps;
  if (j.is_array()) {
    if (j.size() > 3) ctx.fail("at most 3 components");
    for (std::size_t i = 0; i < j.size(); ++i) comps.push_back(affine(j[i], ctx.at(std::to_string(i))));
  } else {
    comps.push_back(affine(j, ctx));
  }
  return [comps](const Point& x, double t) {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < comps.size(); ++i) v[static_cast<Eigen::Index>(i)] = comps[i](x, t);
    return v;
  };
}

inline std::array<bool, 3> mask(const json& j, const Context& ctx) {
  if (j.is_boolean()) {
    const bool b = j.get<bool>();
    return {b, b, b};
  }
  if (!j.is_array() || j.size() > 3) ctx.fail("expected a boolean or an array of booleans");
  std::array<bool, 3> m{false, false, false};
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_boolean()) ctx.fail("expected booleans");
    m[i] = j[i].get<bool>();
  }
  return m;
}

inline std::function<Mesh(int)> mesh_builder(const json& j, const std::filesystem::path& base, int& dim,
                                             const Context& ctx) {
  if (j.contains("file")) {
    check_keys(j, ctx, {"file"});
    std::filesystem::path p = j["file"].get<std::string>();
    if (p.is_relative()) p = base / p;
    const Mesh probe = load_mesh(p.string());
    dim = probe.dim();
    return [p](int refine) {
      if (refine != 0) throw Error("mesh files cannot be refined");
      return load_mesh(p.string());
    };
  }
  check_keys(j, ctx, {"generator", "size", "cells", "origin", "jitter", "seed"});
  const std::string gen = j.value("generator", "");
  GridOptions o;
  if (j.contains("origin")) o.origin = point(j["origin"], ctx.at("origin"));
  o.jitter = number_or(j, "jitter", 0.0, ctx);
  if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
  if (!j.contains("size") || !j.contains("cells")) ctx.fail("generator needs size and cells");
  const Point size = point(j["size"], ctx.at("size"));
  const auto& cj = j["cells"];
  if (gen == "rectangle") {
    if (!cj.is_array() || cj.size() != 2) ctx.at("cells").fail("expected [nx, ny]");
    dim = 2;
    const std::size_t nx = cj[0].get<std::size_t>(), ny = cj[1].get<std::size_t>();
    return [=](int refine) {
      const std::size_t k = std::size_t{1} << refine;
      return generate_rect_mesh(size.x(), size.y(), nx * k, ny * k, o);
    };
  }
  if (gen == "box") {
    if (!cj.is_array() || cj.size() != 3) ctx.at("cells").fail("expected [nx, ny, nz]");
    dim = 3;
    const std::array<std::size_t, 3> n{cj[0].get<std::size_t>(), cj[1].get<std::size_t>(), cj[2].get<std::size_t>()};
    return [=](int refine) {
      const std::size_t k = std::size_t{1} << refine;
      return generate_box_mesh(size, {n[0] * k, n[1] * k, n[2] * k}, o);
    };
  }
  ctx.fail("unknown generator '" + gen + "' (rectangle, box) and no file given");
}

inline Material material(const json& j, int dim, const Context& ctx) {
  if (dim == 2) {
    check_keys(j, ctx, {"G", "nu", "a", "l", "rho", "I"});
    return Material(CosseratMaterial2D{number(j.value("G", json()), ctx.at("G")), number_or(j, "nu", 0.0, ctx),
                                       number_or(j, "a", 0.0, ctx), number_or(j, "l", 0.0, ctx),
                                       number_or(j, "rho", 1.0, ctx), number_or(j, "I", 1.0, ctx)});
  }
  check_keys(j, ctx, {"K", "lambda", "G", "Gc", "L", "M", "Mc", "rho", "I"});
  if (j.contains("K") == j.contains("lambda")) ctx.fail("give exactly one of K and lambda");
  const double G = number(j.value("G", json()), ctx.at("G"));
  const double K = j.contains("K") ? number(j["K"], ctx.at("K")) : number(j["lambda"], ctx.at("lambda")) + 2.0 * G / 3.0;
  return Material(CosseratMaterial3D{K, G, number_or(j, "Gc", 0.0, ctx), number_or(j, "L", 0.0, ctx),
                                     number_or(j, "M", 0.0, ctx), number_or(j, "Mc", 0.0, ctx),
                                     number_or(j, "rho", 1.0, ctx), number_or(j, "I", 1.0, ctx)});
}

inline BoundaryCondition boundary(const json& j, int dim, const Context& ctx) {
  check_keys(j, ctx, {"clamped", "fix_u", "fix_phi", "u", "phi", "traction", "couple"});
  BoundaryCondition bc;
  if (j.value("clamped", false)) bc.fix_u = bc.fix_phi = {true, true, true};
  if (j.contains("fix_u")) bc.fix_u = mask(j["fix_u"], ctx.at("fix_u"));
  if (j.contains("fix_phi")) bc.fix_phi = mask(j["fix_phi"], ctx.at("fix_phi"));
  if (j.contains("u")) bc.u_D = field(j["u"], dim, ctx.at("u"));
  if (j.contains("phi")) bc.phi_D = field(j["phi"], dim, ctx.at("phi"));
  if (j.contains("traction")) bc.traction = field(j["traction"], dim, ctx.at("traction"));
  if (j.contains("couple")) bc.couple = field(j["couple"], dim, ctx.at("couple"));
  return bc;
}

inline ExactSolution solution(const json& j, int dim, const Context& ctx) {
  check_keys(j, ctx, {"u", "phi"});
  const Field u = j.contains("u") ? field(j["u"], dim, ctx.at("u")) : zero_field();
  const Field p = j.contains("phi") ? field(j["phi"], dim, ctx.at("phi")) : zero_field();
  return {[u](const Point& x) { return u(x, 0.0); }, [p](const Point& x) { return p(x, 0.0); }};
}

inline void emit_list(const json& j, Emit& e, const Context& ctx) {
  if (!j.is_array()) ctx.fail("expected an array of vtk, csv, report");
  e = {false, false, false};
  for (const auto& v : j) {
    const std::string s = v.get<std::string>();
    if (s == "vtk") e.vtk = true;
    else if (s == "csv") e.csv = true;
    else if (s == "report") e.report = true;
    else ctx.fail("unknown output kind '" + s + "'");
  }
}

}  // namespace config_detail

/// Parses a run configuration; relative paths resolve against `base_dir`.
inline RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = ".") {
  using namespace config_detail;
  const Context root{"$"};
  check_keys(j, root,
             {"name", "description", "mesh", "material", "boundary", "loads", "mode", "T", "dt", "initial", "exact",
              "expected", "probes", "solver", "output", "neumann", "damping_length"});
  RunConfig rc;
  CaseSpec& s = rc.spec;
  s.name = j.value("name", "run");
  s.description = j.value("description", "");
  if (!j.contains("mesh")) root.fail("missing mesh");
  int dim = 2;
  s.make_mesh = mesh_builder(j["mesh"], base_dir, dim, root.at("mesh"));
  if (!j.contains("material")) root.fail("missing material");
  s.material = material(j["material"], dim, root.at("material"));

  if (!j.contains("boundary") || !j["boundary"].is_object()) root.fail("missing boundary object");
  for (const auto& [tag, b] : j["boundary"].items()) s.problem.bcs[tag] = boundary(b, dim, root.at("boundary." + tag));
  if (j.contains("loads")) {
    const json& l = j["loads"];
    check_keys(l, root.at("loads"), {"force", "couple"});
    if (l.contains("force")) s.problem.loads.force = field(l["force"], dim, root.at("loads.force"));
    if (l.contains("couple")) s.problem.loads.couple = field(l["couple"], dim, root.at("loads.couple"));
  }
  if (j.contains("neumann")) {
    const std::string n = j["neumann"].get<std::string>();
    if (n == "reconstruction") s.problem.neumann = NeumannTesting::FacetReconstruction;
    else if (n == "cell") s.problem.neumann = NeumannTesting::AdjacentCell;
    else root.at("neumann").fail("expected reconstruction or cell");
  }
  if (j.contains("damping_length")) s.problem.damping_length = number(j["damping_length"], root.at("damping_length"));

  const std::string mode = j.value("mode", "static");
  if (mode == "static") {
    s.mode = RunMode::Static;
  } else if (mode == "dynamic") {
    s.mode = RunMode::Dynamic;
    s.T = number(j.value("T", json()), root.at("T"));
    if (!(s.T > 0.0)) root.at("T").fail("must be positive");
    s.dt = number_or(j, "dt", s.T / 2000.0, root);
  } else {
    root.at("mode").fail("expected static or dynamic");
  }
  if (j.contains("initial")) s.initial = solution(j["initial"], dim, root.at("initial"));
  if (j.contains("exact")) s.exact = solution(j["exact"], dim, root.at("exact"));
  if (j.contains("expected")) {
    const auto names = stress_components(dim);
    for (const auto& e : j["expected"]) {
      const Context ec = root.at("expected");
      check_keys(e, ec, {"component", "value", "tolerance"});
      const std::string name = e.value("component", "");
      bool known = false;
      for (const auto& c : names) known = known || c.name == name;
      if (!known) ec.fail("unknown stress component '" + name + "'");
      const Scalar v = affine(e.value("value", json()), ec.at("value"));
      s.expected.push_back({name, [v](const Point& x) { return v(x, 0.0); }, number(e.value("tolerance", json()), ec)});
    }
  }
  if (j.contains("probes")) {
    for (const auto& p : j["probes"]) {
      const Context pc = root.at("probes");
      check_keys(p, pc, {"name", "x", "field", "component"});
      Probe pr;
      pr.name = p.value("name", "probe" + std::to_string(s.probes.size()));
      pr.x = point(p.value("x", json()), pc.at("x"));
      const std::string f = p.value("field", "u");
      if (f != "u" && f != "phi") pc.at("field").fail("expected u or phi");
      pr.component = p.value("component", 0) + (f == "phi" ? dim : 0);
      s.probes.push_back(pr);
    }
  }
  if (j.contains("solver")) {
    const json& sj = j["solver"];
    check_keys(sj, root.at("solver"), {"kind", "tolerance", "max_iterations"});
    if (sj.contains("kind")) rc.run.solver.kind = solver_kind_from_string(sj["kind"].get<std::string>());
    rc.run.solver.tolerance = number_or(sj, "tolerance", rc.run.solver.tolerance, root.at("solver"));
    if (sj.contains("max_iterations")) rc.run.solver.max_iterations = sj["max_iterations"].get<Eigen::Index>();
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, root.at("output"), {"dir", "emit", "snapshot_every"});
    if (o.contains("dir")) {
      std::filesystem::path d = o["dir"].get<std::string>();
      rc.artifacts.output_dir = d.is_relative() ? base_dir / d : d;
    }
    if (o.contains("emit")) emit_list(o["emit"], rc.artifacts.emit, root.at("output.emit"));
    rc.artifacts.snapshot_every = o.value("snapshot_every", std::size_t{0});
  }
  return rc;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
  try {
    return parse_run_config(j, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
  } catch (const nlohmann::json::exception& e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
}

}  // namespace cosserat_dem
