// Command-line front end: generate instances, solve, verify, evaluate, sweep
// and export models.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "edgeharden/errors.hpp"
#include "edgeharden/evaluate.hpp"
#include "edgeharden/formulations.hpp"
#include "edgeharden/instance.hpp"
#include "edgeharden/milp.hpp"
#include "edgeharden/oracle.hpp"
#include "edgeharden/solver.hpp"

namespace fs = std::filesystem;
using namespace edgeharden;

namespace {

enum Exit { ok = 0, verify_failed = 1, usage = 2, parse = 3, infeasible = 4, solver_error = 5 };

struct UsageError : Error {
  using Error::Error;
};

// Unreadable files count as parse failures.
struct FileError : Error {
  using Error::Error;
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw FileError("cannot write " + path.string());
}

Instance read_instance(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw FileError("cannot open instance " + path.string());
  std::vector<std::string> warnings;
  Instance inst;
  try {
    inst = load(path, &warnings);
  } catch (const ParseError& e) {
    throw FileError(path.string() + ": " + e.what());
  }
  for (const auto& w : warnings) fmt::print(stderr, "warning: {}: {}\n", path.string(), w);
  return inst;
}

Solution read_solution(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw FileError("cannot open solution " + path.string());
  std::vector<std::string> warnings;
  Solution sol;
  try {
    sol = load_solution(path, &warnings);
  } catch (const ParseError& e) {
    throw FileError(path.string() + ": " + e.what());
  }
  for (const auto& w : warnings) fmt::print(stderr, "warning: {}: {}\n", path.string(), w);
  return sol;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) throw UsageError(fmt::format("bad grid value '{}'", tok));
    out.push_back(v);
  }
  return out;
}

struct SolverFlags {
  std::string backend;
  double gap = 1e-4;
  double time_limit = 600.0;
  int threads = 1;

  void add(CLI::App* app) {
    app->add_option("--backend", backend, "Solver backend (default: $EDGEHARDEN_SOLVER, then highs, then cbc)");
    app->add_option("--gap", gap, "Relative MIP gap")->capture_default_str();
    app->add_option("--time-limit", time_limit, "Seconds per solve")->capture_default_str();
    app->add_option("--threads", threads, "Solver threads")->capture_default_str();
  }
  SolverConfig config(std::uint64_t seed) const {
    SolverConfig c;
    c.backend = backend;
    c.mip_gap = gap;
    c.time_limit = time_limit;
    c.threads = threads;
    c.seed = seed;
    return c;
  }
};

void print_stats(const ModelStats& s) {
  fmt::print("rows        {}\ncols        {}\nbinaries    {}\nintegers    {}\ncontinuous  {}\nnonzeros    {}\n",
             s.rows, s.cols, s.binaries, s.integers, s.continuous, s.nonzeros);
}

// gen ----------------------------------------------------------------------

struct GenArgs {
  GenConfig cfg;
  fs::path out;
};

void add_gen(CLI::App& app, GenArgs& a, int& rc) {
  auto* cmd = app.add_subcommand("gen", "Generate a synthetic instance");
  auto& c = a.cfg;
  cmd->add_option("-o,--out", a.out, "Instance file to write")->required();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--areas", c.num_areas, "Access areas I")->capture_default_str();
  cmd->add_option("--nodes", c.num_nodes, "Edge nodes J")->capture_default_str();
  cmd->add_option("--levels", c.num_levels, "Hardening levels R")->capture_default_str();
  cmd->add_option("--demand-min", c.demand_range.first)->capture_default_str();
  cmd->add_option("--demand-max", c.demand_range.second)->capture_default_str();
  cmd->add_option("--penalty-min", c.penalty_range.first, "Unmet-demand penalty range")->capture_default_str();
  cmd->add_option("--penalty-max", c.penalty_range.second)->capture_default_str();
  cmd->add_option("--hcost-min", c.base_harden_cost_range.first, "Level-1 hardening cost range")
      ->capture_default_str();
  cmd->add_option("--hcost-max", c.base_harden_cost_range.second)->capture_default_str();
  cmd->add_option("--dh", c.delta_h, "Hardening cost step per level")->capture_default_str();
  cmd->add_option("--gamma1", c.gamma_level1, "Level-1 hardening impact")->capture_default_str();
  cmd->add_option("--dgamma", c.delta_gamma, "Hardening impact step per level")->capture_default_str();
  cmd->add_option("--u", c.u_uniform, "Workload impact on delay deviation")->capture_default_str();
  cmd->add_option("--psi", c.psi, "Hardening cost scale")->capture_default_str();
  cmd->add_option("--capacity-pool", c.capacity_pool, "Node capacities drawn from")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--dmin-min", c.delay_min_range.first, "Nominal delay range (ms)")->capture_default_str();
  cmd->add_option("--dmin-max", c.delay_min_range.second)->capture_default_str();
  cmd->add_option("--ddev-min", c.delay_dev_range.first, "Delay deviation range (ms)")->capture_default_str();
  cmd->add_option("--ddev-max", c.delay_dev_range.second)->capture_default_str();
  cmd->add_option("--rho", c.delay_penalty, "Delay penalty per unit and ms")->capture_default_str();
  cmd->add_option("--alpha", c.unmet_fraction_cap, "Largest unmet fraction per area")->capture_default_str();
  cmd->add_option("--delta", c.delay_cap, "Average delay cap per area (ms)")->capture_default_str();
  cmd->add_option("--budget", c.budget, "Hardening budget B")->capture_default_str();
  cmd->add_option("--diu-budget", c.uncertainty_budget_diu, "Uncertainty budget without hardening")
      ->capture_default_str();
  cmd->add_option("--gamma2", c.uncertainty_budget_ddu, "Uncertainty budget with hardening")
      ->capture_default_str();
  cmd->callback([&a, &rc] {
    const Instance inst = generate(a.cfg);
    save(inst, a.out);
    std::int64_t demand = 0, capacity = 0;
    for (auto v : inst.demand) demand += v;
    for (auto v : inst.capacity) capacity += v;
    fmt::print("wrote {}\nareas {}  nodes {}  levels {}  links {}\ntotal demand {}  total capacity {}\n",
               a.out.string(), inst.num_areas, inst.num_nodes, inst.num_levels, inst.num_links(), demand,
               capacity);
    rc = ok;
  });
}

// solve --------------------------------------------------------------------

struct SolveArgs {
  fs::path instance;
  std::string formulation;
  fs::path out;
  fs::path export_path;
  std::uint64_t seed = 0;
  int sddu_scenarios = 5;
  bool no_cuts = false;
  SolverFlags solver;
};

BuiltModel build_for(const Instance& inst, Formulation f, std::uint64_t seed, int scenarios, bool cuts) {
  BuildOptions opt;
  opt.valid_cuts = cuts;
  if (f == Formulation::sddu) {
    const auto scen = make_sddu_scenarios(scenarios, seed);
    return build(inst, f, &scen, opt);
  }
  return build(inst, f, nullptr, opt);
}

Formulation formulation_arg(const std::string& name) {
  try {
    return parse_formulation(name);
  } catch (const InvalidConfig& e) {
    throw UsageError(std::string(e.what()) + " (expected det, nh, ro-nh, rddu, erddu, sddu)");
  }
}

void export_model(const MilpModel& model, const fs::path& path) {
  const bool lp = path.extension() == ".lp";
  const ExportedModel e = lp ? write_lp(model) : write_mps(model);
  write_file(path, e.text);
  if (!e.mangled.empty()) {
    fs::path side = path;
    side += ".names";
    write_file(side, sidecar_text(e));
    fmt::print("names       {}\n", side.string());
  }
  fmt::print("model       {}\n", path.string());
}

void add_solve(CLI::App& app, SolveArgs& a, int& rc) {
  auto* cmd = app.add_subcommand("solve", "Build and solve one formulation");
  cmd->add_option("instance", a.instance, "Instance file")->required();
  cmd->add_option("-f,--formulation", a.formulation, "det, nh, ro-nh, rddu, erddu or sddu")->required();
  cmd->add_option("-o,--out", a.out, "Solution file to write");
  cmd->add_option("--export", a.export_path, "Also write the model (.mps or .lp)");
  cmd->add_option("--seed", a.seed, "Seed for the solver and the stochastic scenarios")->capture_default_str();
  cmd->add_option("--sddu-scenarios", a.sddu_scenarios, "Scenarios in the stochastic model")->capture_default_str();
  cmd->add_flag("--no-cuts", a.no_cuts, "Leave out the valid inequalities");
  a.solver.add(cmd);
  cmd->callback([&a, &rc] {
    const Formulation f = formulation_arg(a.formulation);
    const Instance inst = read_instance(a.instance);
    const BuiltModel b = build_for(inst, f, a.seed, a.sddu_scenarios, !a.no_cuts);
    if (!a.export_path.empty()) export_model(b.model, a.export_path);
    const SolverResult res = solve(b.model, a.solver.config(a.seed));
    fmt::print("formulation {}\nbackend     {}\nstatus      {}\n", formulation_name(f), res.backend,
               status_name(res.status));
    if (!res.message.empty()) fmt::print("message     {}\n", res.message);
    if (res.status == SolveStatus::infeasible) {
      rc = infeasible;
      return;
    }
    if (!res.has_solution()) {
      rc = solver_error;
      return;
    }
    Solution sol;
    try {
      sol = extract_solution(inst, b, res.values);
    } catch (const CorruptSolution& e) {
      fmt::print(stderr, "error: solver returned an unusable point: {}\n", e.what());
      rc = solver_error;
      return;
    }
    const double gap =
        std::abs(res.objective - res.bound) / std::max(1e-10, std::abs(res.objective));
    fmt::print("objective   {:.10g}\npayment     {:.10g}\nallocation  {:.10g}\nbound       {:.10g}\n",
               sol.objective, sol.hardening_payment, sol.allocation_cost, res.bound);
    fmt::print("gap         {:.6g}\nruntime_s   {:.3f}\n", gap, res.runtime);
    print_stats(b.model.stats());
    if (!a.out.empty()) {
      save_solution(sol, a.out);
      fmt::print("solution    {}\n", a.out.string());
    }
    rc = ok;
  });
}

// verify -------------------------------------------------------------------

struct VerifyArgs {
  fs::path instance;
  fs::path solution;
  bool objective = false;
  double tol = 1e-6;
};

void add_verify(CLI::App& app, VerifyArgs& a, int& rc) {
  auto* cmd = app.add_subcommand("verify", "Recompute worst-case cost and delays of a solution");
  cmd->add_option("instance", a.instance, "Instance file")->required();
  cmd->add_option("solution", a.solution, "Solution file")->required();
  cmd->add_flag("--objective", a.objective,
                "Also compare the stored objective (implied for rddu and erddu solutions)");
  cmd->add_option("--tol", a.tol, "Relative objective tolerance")->capture_default_str();
  cmd->callback([&a, &rc] {
    const Instance inst = read_instance(a.instance);
    const Solution sol = read_solution(a.solution);
    const bool check = a.objective || sol.formulation == "rddu" || sol.formulation == "erddu";
    const Certificate c = certify(inst, sol, check, a.tol);
    fmt::print("formulation        {}\nstored objective   {:.10g}\n", sol.formulation, sol.objective);
    if (!c.delays.empty()) {
      fmt::print("worst-case cost    {:.10g}\n", c.recomputed_cost);
      for (std::size_t i = 0; i < c.delays.size(); ++i)
        fmt::print("delay area {:<3}     {:.6f} / {:.6f}\n", i, c.delays[i], inst.delay_cap[i]);
    }
    for (const auto& f : c.failures) fmt::print("FAIL {}\n", f);
    fmt::print("{}\n", c.pass ? "PASS" : "FAIL");
    rc = c.pass ? ok : verify_failed;
  });
}

// evaluate -----------------------------------------------------------------

struct EvaluateArgs {
  fs::path instance;
  std::string schemes = "nh,rand,sddu,rddu";
  int n = 200;
  std::uint64_t seed = 0;
  int sddu_scenarios = 5;
  fs::path out_dir = ".";
  double alloc_time_limit = 60.0;
  SolverFlags solver;
};

void add_evaluate(CLI::App& app, EvaluateArgs& a, int& rc) {
  auto* cmd = app.add_subcommand("evaluate", "Compare hardening schemes on sampled scenarios");
  cmd->add_option("instance", a.instance, "Instance file")->required();
  cmd->add_option("--schemes", a.schemes, "Comma list of NH, RAND, SDDU, RDDU")->capture_default_str();
  cmd->add_option("-N,--scenarios", a.n, "Scenarios per scheme")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Seed for scenarios, random hardening and solvers")->capture_default_str();
  cmd->add_option("--sddu-scenarios", a.sddu_scenarios, "Scenarios in the stochastic plan")
      ->capture_default_str();
  cmd->add_option("--out-dir", a.out_dir, "Directory for summary.csv and costs.csv")->capture_default_str();
  cmd->add_option("--alloc-time-limit", a.alloc_time_limit, "Seconds per allocation solve")
      ->capture_default_str();
  a.solver.add(cmd);
  cmd->callback([&a, &rc] {
    std::vector<Scheme> schemes;
    for (const auto& s : split(a.schemes)) {
      try {
        schemes.push_back(parse_scheme(s));
      } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
      }
    }
    if (a.n < 1) throw UsageError("-N must be positive");
    const Instance inst = read_instance(a.instance);
    EvaluationConfig cfg;
    cfg.planning = a.solver.config(a.seed);
    cfg.allocation = a.solver.config(a.seed);
    cfg.allocation.time_limit = a.alloc_time_limit;
    cfg.sddu_scenarios = a.sddu_scenarios;
    const EvaluationReport rep = compare_schemes(inst, a.n, a.seed, schemes, cfg);
    write_file(a.out_dir / "summary.csv", report_summary_csv(rep));
    write_file(a.out_dir / "costs.csv", report_costs_csv(rep));
    fmt::print("{:<6} {:>10} {:>12} {:>12} {:>12} {:>12} {:>6}\n", "scheme", "payment", "mean", "stddev",
               "p5", "p95", "infeas");
    bool any_failed = false;
    for (const auto& r : rep.schemes) {
      if (!r.ok) {
        fmt::print("{:<6} failed: {}\n", scheme_name(r.scheme), r.error);
        any_failed = true;
        continue;
      }
      fmt::print("{:<6} {:>10.4f} {:>12.4f} {:>12.4f} {:>12.4f} {:>12.4f} {:>6}\n", scheme_name(r.scheme),
                 r.payment, r.stats.mean, r.stats.stddev, r.stats.p5, r.stats.p95, r.infeasible);
    }
    fmt::print("reports in {}\n", a.out_dir.string());
    rc = any_failed ? solver_error : ok;
  });
}

// sweep --------------------------------------------------------------------

struct SweepArgs {
  fs::path instance;
  std::string param;
  std::string grid;
  std::string formulations = "rddu";
  fs::path out = "sweep.csv";
  fs::path long_out;
  std::uint64_t seed = 0;
  bool cold = false;
  SolverFlags solver;
};

void add_sweep(CLI::App& app, SweepArgs& a, int& rc) {
  auto* cmd = app.add_subcommand("sweep", "Solve over a grid of one parameter");
  cmd->add_option("instance", a.instance, "Instance file")->required();
  cmd->add_option("--param", a.param, "B, psi, gamma2, rho, dgamma, gamma1, u, delta, I or J")->required();
  cmd->add_option("--grid", a.grid, "Comma list of values")->required();
  cmd->add_option("--formulations", a.formulations, "Comma list (det, nh, ro-nh, rddu, erddu)")
      ->capture_default_str();
  cmd->add_option("-o,--out", a.out, "Wide CSV")->capture_default_str();
  cmd->add_option("--long", a.long_out, "Also write the long-format CSV");
  cmd->add_option("--seed", a.seed, "Solver seed")->capture_default_str();
  cmd->add_flag("--cold", a.cold, "Solve every point from scratch");
  a.solver.add(cmd);
  cmd->callback([&a, &rc] {
    SweepParam p;
    try {
      p = parse_sweep_param(a.param);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    const auto grid = parse_grid(a.grid);
    std::vector<Formulation> forms;
    for (const auto& s : split(a.formulations)) {
      const Formulation f = formulation_arg(s);
      if (f == Formulation::sddu) throw UsageError("sweep does not support sddu");
      forms.push_back(f);
    }
    const Instance inst = read_instance(a.instance);
    std::vector<SweepPoint> pts;
    try {
      pts = sweep(inst, p, grid, forms, a.solver.config(a.seed), !a.cold);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    write_file(a.out, sweep_csv(p, pts));
    if (!a.long_out.empty()) write_file(a.long_out, sweep_long_csv(p, pts));
    fmt::print("{:>10} {:<8} {:<9} {:>12} {:>10} {:>10} {:>7}\n", sweep_param_name(p), "model", "status",
               "cost", "payment", "runtime_s", "rows");
    for (const auto& pt : pts)
      fmt::print("{:>10.6g} {:<8} {:<9} {:>12.4f} {:>10.4f} {:>10.3f} {:>7}\n", pt.value,
                 formulation_name(pt.formulation), status_name(pt.status), pt.total_cost, pt.payment,
                 pt.runtime, pt.stats.rows);
    fmt::print("table in {}\n", a.out.string());
    rc = ok;
  });
}

// export / probe -------------------------------------------------------------

struct ExportArgs {
  fs::path instance;
  std::string formulation;
  fs::path out;
  std::uint64_t seed = 0;
  int sddu_scenarios = 5;
  bool no_cuts = false;
};

void add_export(CLI::App& app, ExportArgs& a, int& rc) {
  auto* cmd = app.add_subcommand("export", "Write a formulation as MPS or LP without solving");
  cmd->add_option("instance", a.instance, "Instance file")->required();
  cmd->add_option("-f,--formulation", a.formulation, "det, nh, ro-nh, rddu, erddu or sddu")->required();
  cmd->add_option("-o,--out", a.out, "Output file; .lp selects LP format, anything else MPS")->required();
  cmd->add_option("--seed", a.seed, "Seed for the stochastic scenarios")->capture_default_str();
  cmd->add_option("--sddu-scenarios", a.sddu_scenarios)->capture_default_str();
  cmd->add_flag("--no-cuts", a.no_cuts, "Leave out the valid inequalities");
  cmd->callback([&a, &rc] {
    const Formulation f = formulation_arg(a.formulation);
    const Instance inst = read_instance(a.instance);
    const BuiltModel b = build_for(inst, f, a.seed, a.sddu_scenarios, !a.no_cuts);
    export_model(b.model, a.out);
    print_stats(b.model.stats());
    rc = ok;
  });
}

void add_probe(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("probe", "List solver backends that work here");
  cmd->callback([&rc] {
    std::vector<std::string> log;
    const auto working = probe_backends(&log);
    for (const auto& b : registered_backends()) {
      const bool good = std::find(working.begin(), working.end(), b) != working.end();
      fmt::print("{:<8} {}\n", b, good ? "ok" : "unavailable");
    }
    for (const auto& line : log) fmt::print("  {}\n", line);
    if (!working.empty()) fmt::print("default  {}\n", default_backend());
    rc = working.empty() ? solver_error : ok;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link hardening and workload allocation under decision-dependent delay uncertainty"};
  app.require_subcommand(1);
  int rc = ok;
  GenArgs gen;
  SolveArgs solve_args;
  VerifyArgs verify;
  EvaluateArgs evaluate;
  SweepArgs sweep_args;
  ExportArgs export_args;
  add_gen(app, gen, rc);
  add_solve(app, solve_args, rc);
  add_verify(app, verify, rc);
  add_evaluate(app, evaluate, rc);
  add_sweep(app, sweep_args, rc);
  add_export(app, export_args, rc);
  add_probe(app, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  } catch (const UsageError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return usage;
  } catch (const InvalidConfig& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return usage;
  } catch (const InvalidArgument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return usage;
  } catch (const ParseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return parse;
  } catch (const FileError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return parse;
  } catch (const CorruptSolution& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return parse;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return solver_error;
  }
  return rc;
}
