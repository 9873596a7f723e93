#include <cosserat_dem.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>

using namespace cosserat_dem;

namespace {

struct Flags {
  std::string output_dir;
  int refine = 0;
  std::string solver;
  double dt = 0.0;
  std::size_t steps = 0;
  unsigned threads = 1;
  std::vector<std::string> emit;
  std::size_t snapshot_every = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--output-dir", f.output_dir, "directory for VTK, CSV and report files");
  cmd->add_option("--refine", f.refine, "uniform refinements of generated meshes")->check(CLI::Range(0, 6));
  cmd->add_option("--solver", f.solver, "linear solver")->check(CLI::IsMember({"direct", "krylov"}));
  cmd->add_option("--dt", f.dt, "time step override for dynamic runs")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", f.steps, "number of time steps override for dynamic runs");
  cmd->add_option("--threads", f.threads, "workers for independent sweep entries")->check(CLI::PositiveNumber);
  cmd->add_option("--emit", f.emit, "outputs to write (vtk, csv, report)")
      ->check(CLI::IsMember({"vtk", "csv", "report"}))
      ->delimiter(',');
  cmd->add_option("--snapshot-every", f.snapshot_every, "VTK snapshot period in steps for dynamic runs");
}

void apply(const Flags& f, RunOptions& run, ArtifactOptions& art) {
  if (!f.output_dir.empty()) art.output_dir = f.output_dir;
  run.refine = f.refine;
  if (!f.solver.empty()) run.solver.kind = solver_kind_from_string(f.solver);
  if (f.dt > 0.0) run.dt = f.dt;
  if (f.steps) run.steps = f.steps;
  if (!f.emit.empty()) {
    art.emit = {false, false, false};
    for (const auto& e : f.emit) {
      if (e == "vtk") art.emit.vtk = true;
      if (e == "csv") art.emit.csv = true;
      if (e == "report") art.emit.report = true;
    }
  }
  if (f.snapshot_every) art.snapshot_every = f.snapshot_every;
}

int finish(const ErrorReport& r, const ArtifactOptions& art) {
  std::cout << report_text(r);
  std::cout << "output: " << art.output_dir.string() << '\n';
  return r.pass() ? 0 : 1;
}

int run_plate_sweep(const std::string& which, bool fine, const Flags& f, const ArtifactOptions& art) {
  std::vector<PlateTable> tables;
  for (const auto& t : plate_tables())
    if (which == "all" || which == std::to_string(t.test)) tables.push_back(t);
  if (tables.empty()) throw Error("unknown plate table '" + which + "' (1, 2, 3 or all)");
  RunOptions run;
  if (!f.solver.empty()) run.solver.kind = solver_kind_from_string(f.solver);
  const auto results = plate_sweep(tables, !fine, f.threads, run);
  std::filesystem::create_directories(art.output_dir);
  const auto path = art.output_dir / "plate_sweep.csv";
  std::ofstream csv(path);
  csv << "test,a,r_over_l,stress_concentration,analytical,error_percent,seconds\n";
  std::cout << "test  a        r/l      computed  analytical  error\n";
  for (const auto& r : results) {
    csv << r.test << ',' << r.a << ',' << r.r_over_l << ',' << r.scf << ',' << r.analytical << ','
        << 100.0 * r.error << ',' << r.seconds << '\n';
    std::printf("%-5d %-8.4f %-8.3f %-9.4f %-11.3f %+.2f%%\n", r.test, r.a, r.r_over_l, r.scf, r.analytical,
                100.0 * r.error);
  }
  std::cout << "output: " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational discrete element solver for linear Cosserat elasticity"};
  app.require_subcommand(1);

  Flags run_flags, case_flags;
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run a JSON configuration");
  run_cmd->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
  add_common(run_cmd, run_flags);

  std::string case_name, sweep;
  bool fine = false;
  auto* case_cmd = app.add_subcommand("case", "run a builtin case");
  case_cmd->add_option("name", case_name, "builtin case name (see list)")->required();
  add_common(case_cmd, case_flags);
  case_cmd->add_option("--sweep", sweep, "plate_hole only: run table 1, 2, 3 or all")
      ->check(CLI::IsMember({"1", "2", "3", "all"}));
  case_cmd->add_flag("--fine", fine, "plate_hole only: use the fine shipped meshes");

  auto* list_cmd = app.add_subcommand("list", "list builtin cases");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list_cmd) {
      for (const auto& n : builtin_case_names()) {
        const CaseSpec s = builtin_case(n);
        std::cout << std::left << std::setw(16) << n << s.description << '\n';
      }
      std::cout << "direct solver backend: " << kDirectBackend << '\n';
      return 0;
    }
    if (*run_cmd) {
      RunConfig rc = load_run_config(config_path);
      apply(run_flags, rc.run, rc.artifacts);
      return finish(run_case(rc.spec, rc.run, rc.artifacts), rc.artifacts);
    }
    RunOptions run;
    ArtifactOptions art;
    art.output_dir = std::filesystem::path("output") / case_name;
    apply(case_flags, run, art);
    if (!sweep.empty() || fine) {
      if (case_name != "plate_hole") throw Error("--sweep and --fine apply to plate_hole only");
      return run_plate_sweep(sweep.empty() ? "all" : sweep, fine, case_flags, art);
    }
    return finish(run_case(builtin_case(case_name), run, art), art);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
