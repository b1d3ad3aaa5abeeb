// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails. Arguments select criteria by number.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../helpers.hpp"
#include "edgeharden/evaluate.hpp"
#include "edgeharden/formulations.hpp"
#include "edgeharden/linearize.hpp"
#include "edgeharden/oracle.hpp"
#include "edgeharden/solver.hpp"

using namespace edgeharden;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kExactGap = 1e-9;        // solver gap for optimum comparisons
constexpr double kAgreeRel = 1e-6;        // relative agreement of two optima
constexpr double kCertTol = 1e-6;         // worst-case recomputation vs objective
constexpr double kSweepGap = 2e-3;        // sweep gap
constexpr double kSweepWall = 900.0;      // seconds per sweep
constexpr double kSddSlack = 0.02;        // RDDU may exceed SDDU by 2 %
constexpr int kScenarios = 200;           // evaluation scenarios
constexpr double kRuntimeGap = 5e-2;      // gap for the runtime comparison
constexpr double kRuntimeLimit = 300.0;   // seconds per runtime-comparison solve
constexpr double kRuntimeSlack = 1.25;    // e-RDDU median may be 25 % slower

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolverConfig exact() {
  SolverConfig s;
  s.mip_gap = kExactGap;
  s.time_limit = 300.0;
  return s;
}

// Optimal objective, or nullopt when infeasible. Anything else is an error.
std::optional<double> optimum(const Instance& inst, Formulation f, std::string& err,
                              Solution* sol = nullptr) {
  auto r = testutil::run(inst, f, exact());
  if (r.result.status == SolveStatus::infeasible) return std::nullopt;
  if (r.result.status != SolveStatus::optimal) {
    err = fmt::format("{} ended {}", formulation_name(f), status_name(r.result.status));
    return std::nullopt;
  }
  if (sol) *sol = r.solution;
  return r.result.objective;
}

// 1 --------------------------------------------------------------------------

Outcome equivalence() {
  double worst = 0.0;
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = testutil::small(seed, 3, 3, 3, 10);
    std::string err;
    const auto a = optimum(inst, Formulation::rddu, err);
    const auto b = optimum(inst, Formulation::erddu, err);
    if (!err.empty()) return {false, fmt::format("seed {}: {}", seed, err)};
    if (a.has_value() != b.has_value()) return {false, fmt::format("seed {}: feasibility differs", seed)};
    if (!a) continue;
    ++feasible;
    worst = std::max(worst, rel(*b, *a));
  }
  return {worst <= kAgreeRel && feasible > 0,
          fmt::format("20 instances, {} feasible, max rel diff {:.2e}", feasible, worst)};
}

// 2 --------------------------------------------------------------------------

Outcome certification() {
  // Shapes with I*J <= 4.
  const std::array<std::pair<int, int>, 5> shapes{{{1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 4}}};
  double worst_opt = 0.0, worst_cert = 0.0;
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto [I, J] = shapes[seed % shapes.size()];
    const int R = 1 + static_cast<int>(seed % 2);
    const auto inst = testutil::small(100 + seed, I, J, R, 6);
    const auto best = brute_force_optimal(inst);
    std::string err;
    Solution sol;
    const auto opt = optimum(inst, Formulation::rddu, err, &sol);
    if (!err.empty()) return {false, fmt::format("seed {}: {}", seed, err)};
    if (best.has_value() != opt.has_value())
      return {false, fmt::format("seed {}: brute force and solver disagree on feasibility", seed)};
    if (!best) continue;
    ++feasible;
    worst_opt = std::max(worst_opt, rel(*opt, best->objective));
    const auto cert = certify(inst, sol, true, kCertTol);
    if (!cert.pass) return {false, fmt::format("seed {}: {}", seed, cert.failures.front())};
    worst_cert = std::max(worst_cert, rel(cert.recomputed_cost, *opt));
  }
  return {worst_opt <= kAgreeRel && worst_cert <= kCertTol && feasible >= 10,
          fmt::format("20 instances, {} feasible, max rel diff to brute force {:.2e}, worst-case vs "
                      "objective {:.2e}",
                      feasible, worst_opt, worst_cert)};
}

// 3 --------------------------------------------------------------------------

Outcome degeneracy() {
  double worst = 0.0;
  int hardened = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = testutil::small(200 + seed);
    std::string err;
    Solution det;
    const auto d = optimum(inst, Formulation::det, err, &det);
    const auto n0 = optimum(inst, Formulation::nh, err);
    if (!err.empty() || !d || !n0) return {false, fmt::format("seed {}: {}", seed, err.empty() ? "infeasible" : err)};
    for (int t : det.t) hardened += t;
    worst = std::max(worst, rel(*d, *n0));

    inst.uncertainty_budget_ddu = 0.0;
    std::fill(inst.workload_impact.begin(), inst.workload_impact.end(), 0.0);
    const auto nh = optimum(inst, Formulation::nh, err);
    const auto r = optimum(inst, Formulation::rddu, err);
    const auto e = optimum(inst, Formulation::erddu, err);
    if (!err.empty() || !nh || !r || !e) return {false, fmt::format("seed {}: {}", seed, err.empty() ? "infeasible" : err)};
    worst = std::max({worst, rel(*r, *nh), rel(*e, *nh)});
  }
  return {worst <= kAgreeRel && hardened == 0,
          fmt::format("10 instances, max rel diff {:.2e}, hardened levels in DET {}", worst, hardened)};
}

// 4 --------------------------------------------------------------------------

// Interval for `p` implied by rows where it is the only unfixed variable.
std::pair<double, double> implied(const MilpModel& m, VarRef p, const std::vector<double>& vals,
                                  const std::vector<bool>& fixed) {
  double lo = m.var(p).lower, hi = m.var(p).upper;
  for (const auto& row : m.constraints()) {
    double a = 0.0, rest = 0.0;
    bool usable = true;
    for (const auto& [v, c] : row.expr.terms()) {
      if (v == p)
        a = c;
      else if (fixed[v.index])
        rest += c * vals[v.index];
      else
        usable = false;
    }
    if (!usable || a == 0.0) continue;
    const double bound = (row.rhs - rest) / a;
    if (row.sense == Sense::eq) {
      lo = std::max(lo, bound);
      hi = std::min(hi, bound);
    } else if ((row.sense == Sense::le) == (a > 0.0)) {
      hi = std::min(hi, bound);
    } else {
      lo = std::max(lo, bound);
    }
  }
  return {lo, hi};
}

double product_error() {
  double worst = 0.0;
  for (int y = 0; y <= 1; ++y)
    for (int x = 0; x <= 7; ++x) {
      MilpModel m;
      auto yv = m.add_var("y", VarKind::binary, 0, 1);
      auto xv = m.add_var("x", VarKind::integer, 0, 7);
      auto p = product_bin_int(m, yv, xv, 7, "Y");
      auto [lo, hi] = implied(m, p, {double(y), double(x), 0.0}, {true, true, false});
      worst = std::max({worst, std::abs(lo - y * x), std::abs(hi - y * x)});
    }
  return worst;
}

double square_error() {
  double worst = 0.0;
  for (int x = 0; x <= 15; ++x) {
    MilpModel m;
    auto xv = m.add_var("x", VarKind::integer, 0, 15);
    auto e = binary_expand(m, xv, 15, "y");
    const auto first = m.num_vars();
    auto sq = linearize_square(m, xv, e, 15, "Y");
    std::vector<double> vals(m.num_vars(), 0.0);
    std::vector<bool> fixed(m.num_vars(), true);
    vals[xv.index] = x;
    for (int k = 0; k < e.q(); ++k) vals[e.bits[k].index] = (x >> k) & 1;
    for (std::size_t k = first; k < m.num_vars(); ++k) fixed[k] = false;
    for (std::size_t k = first; k < m.num_vars(); ++k) {
      auto [lo, hi] = implied(m, m.ref(k), vals, fixed);
      worst = std::max(worst, hi - lo);
      vals[k] = lo;
    }
    worst = std::max({worst, m.max_violation(vals).first, std::abs(sq.evaluate(vals) - double(x * x))});
  }
  return worst;
}

// Feasibility of the reformulated row with z fixed to the bits of `mask`.
std::optional<bool> feasible_at(DduConstraintSpec spec, std::size_t mask, bool enhanced) {
  MilpModel m;
  for (std::size_t j = 0; j < spec.z.size(); ++j) {
    const double v = (mask >> j) & 1u;
    spec.z[j] = m.add_var("z" + std::to_string(j + 1), VarKind::binary, v, v);
  }
  if (enhanced)
    dualize_enhanced(m, spec);
  else
    dualize_bigm(m, spec);
  SolverConfig s;
  s.mip_gap = 0.0;
  s.time_limit = 30.0;
  const auto r = solve(m, s);
  if (r.status == SolveStatus::optimal) return true;
  if (r.status == SolveStatus::infeasible) return false;
  return std::nullopt;
}

Outcome linearization() {
  const double ep = product_error(), es = square_error();
  std::mt19937_64 rng(11);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int agree = 0, points = 0, feasible = 0;
  for (int k = 0; k < 50; ++k) {
    DduConstraintSpec s;
    const int m = pick(1, 3), n = pick(1, 3), q = pick(1, 3);
    s.a.assign(m, std::vector<double>(n));
    s.psi.assign(m, std::vector<double>(q));
    for (auto& row : s.a)
      for (auto& a : row) a = pick(-2, 2);
    for (auto& row : s.psi)
      for (auto& p : row) p = pick(-4, 4) / 2.0;
    for (int i = 0; i < m; ++i) s.v.push_back(pick(0, 6) / 2.0);
    for (int c = 0; c < n; ++c) s.u.push_back(pick(-2, 2));
    s.b = pick(-2, 8) / 2.0;
    s.big_m = 10.0;
    s.z.resize(q);
    for (std::size_t mask = 0; mask < (1u << q); ++mask) {
      const auto a = feasible_at(s, mask, false), b = feasible_at(s, mask, true);
      ++points;
      if (a && b && *a == *b) {
        ++agree;
        feasible += *a;
      }
    }
  }
  return {ep == 0.0 && es == 0.0 && agree == points,
          fmt::format("product error {}, square error {}, {} of {} z points agree ({} feasible)", ep, es,
                      agree, points, feasible)};
}

// 5 --------------------------------------------------------------------------

Outcome model_size() {
  const auto inst = generate(GenConfig{});
  const auto a = build_rddu(inst).model.stats();
  const auto b = build_erddu(inst).model.stats();
  const auto expect = 4 * static_cast<std::size_t>(inst.num_levels) * inst.num_links();
  bool never_more = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = testutil::small(seed);
    never_more &= build_erddu(s).model.stats().rows <= build_rddu(s).model.stats().rows;
  }
  return {a.rows - b.rows == expect && expect == 1200 && never_more,
          fmt::format("rows RDDU {} e-RDDU {} difference {} (expected {})", a.rows, b.rows,
                      static_cast<long>(a.rows) - static_cast<long>(b.rows), expect)};
}

// 6 --------------------------------------------------------------------------

struct SweepCheck {
  bool ok = true;
  std::string detail;
};

SweepCheck run_sweep(const Instance& base, SweepParam p, const std::vector<double>& grid, int direction,
                     bool saturate) {
  SolverConfig s;
  s.mip_gap = kSweepGap;
  s.time_limit = std::floor(kSweepWall * 0.9 / static_cast<double>(grid.size()));
  const std::array<Formulation, 1> f{Formulation::rddu};
  const auto t0 = std::chrono::steady_clock::now();
  const auto pts = sweep(base, p, grid, f, s, true);
  const double wall = seconds_since(t0);

  // Infeasible points cost +inf. A point without a plan that is not proven
  // infeasible leaves the trend unresolved.
  SweepCheck out;
  std::vector<double> cost;
  std::string shown;
  for (const auto& pt : pts) {
    const bool has_plan = pt.status == SolveStatus::optimal || pt.status == SolveStatus::feasible;
    if (!has_plan && pt.status != SolveStatus::infeasible) out.ok = false;
    cost.push_back(has_plan ? pt.total_cost : kInf);
    shown += has_plan ? fmt::format(" {}:{:.2f}", pt.value, pt.total_cost)
                      : fmt::format(" {}:{}", pt.value, status_name(pt.status));
  }
  // Each point is within the gap of its optimum, so allow that much slack.
  for (std::size_t k = 1; k < cost.size(); ++k) {
    if (cost[k] == cost[k - 1]) continue;
    const double slack = std::isfinite(cost[k]) ? kSweepGap * std::abs(cost[k]) : 0.0;
    if (direction * (cost[k] - cost[k - 1]) < -slack) out.ok = false;
  }
  const double first = cost.front(), last = cost.back();
  const bool moved = direction > 0 ? last > first * (1 + kSweepGap) : first > last * (1 + kSweepGap);
  if (!moved || !std::isfinite(direction > 0 ? first : last)) out.ok = false;
  if (saturate && rel(cost[cost.size() - 1], cost[cost.size() - 2]) > kSweepGap) out.ok = false;
  if (wall > kSweepWall) out.ok = false;
  out.detail = fmt::format("{} [{}] {:.0f}s", sweep_param_name(p), shown.substr(1), wall);
  return out;
}

Outcome trends() {
  const auto base = generate(GenConfig{});
  std::vector<std::string> parts;
  bool ok = true;

  // Small budgets and weak impacts are infeasible on the defaults.
  auto a = run_sweep(base, SweepParam::budget, {0, 3, 10, 20, 50, 100}, -1, true);
  auto b = run_sweep(base, SweepParam::gamma2, {0, 5, 10, 20, 50, 100}, +1, true);
  auto c = run_sweep(base, SweepParam::dgamma, {0.05, 0.15, 0.25, 0.35, 0.44}, -1, false);
  for (auto* s : {&a, &b, &c}) {
    ok &= s->ok;
    parts.push_back(fmt::format("{} {}", s->ok ? "ok" : "bad", s->detail));
  }

  EvaluationConfig ec;
  ec.planning.mip_gap = kSweepGap;
  ec.planning.time_limit = 300.0;
  ec.allocation.mip_gap = 1e-4;
  ec.allocation.time_limit = 30.0;
  const std::array<Scheme, 4> schemes{Scheme::nh, Scheme::rand, Scheme::sddu, Scheme::rddu};
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = compare_schemes(base, kScenarios, 1, schemes, ec);
  const double wall = seconds_since(t0);
  std::array<double, 4> mean{};
  bool eval_ok = true;
  for (std::size_t k = 0; k < schemes.size(); ++k) {
    const auto* s = rep.find(schemes[k]);
    if (!s || !s->ok) {
      eval_ok = false;
      continue;
    }
    mean[k] = s->stats.mean;
  }
  const double nh = mean[0], rnd = mean[1], sd = mean[2], rd = mean[3];
  eval_ok &= rd <= nh && rd <= rnd && rd <= sd * (1 + kSddSlack);
  ok &= eval_ok;
  parts.push_back(fmt::format("{} mean actual cost NH {:.2f} RAND {:.2f} SDDU {:.2f} RDDU {:.2f} {:.0f}s",
                              eval_ok ? "ok" : "bad", nh, rnd, sd, rd, wall));
  std::string detail;
  for (const auto& p : parts) detail += (detail.empty() ? "" : "; ") + p;
  return {ok, detail};
}

// 7 --------------------------------------------------------------------------

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome runtime() {
  std::vector<double> tr, te;
  int capped = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenConfig g;
    g.seed = seed;
    const auto inst = generate(g);
    for (auto f : {Formulation::rddu, Formulation::erddu}) {
      SolverConfig s;
      s.mip_gap = kRuntimeGap;
      s.time_limit = kRuntimeLimit;
      auto r = testutil::run(inst, f, s);
      if (r.result.status != SolveStatus::optimal) ++capped;
      (f == Formulation::rddu ? tr : te).push_back(r.result.runtime);
    }
  }
  const double mr = median(tr), me = median(te);
  return {me <= kRuntimeSlack * mr,
          fmt::format("median seconds RDDU {:.1f} e-RDDU {:.1f} (ratio {:.2f}, {} solves hit {}s)", mr, me,
                      me / mr, capped, kRuntimeLimit)};
}

// 8 --------------------------------------------------------------------------

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(EDGEHARDEN_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (auto n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& f) {
  std::ifstream in(f, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Output lines that report results; timings and file paths are dropped.
std::string results(const std::string& out) {
  std::istringstream in(out);
  std::string line, keep;
  while (std::getline(in, line))
    if (line.rfind("runtime", 0) != 0 && line.rfind("solution", 0) != 0) keep += line + "\n";
  return keep;
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "edgeharden_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto q = [&](const std::string& name) { return "'" + (dir / name).string() + "'"; };
  const std::string small =
      " --seed 5 --areas 3 --nodes 3 --demand-min 5 --demand-max 10 --capacity-pool 5,10,15 --budget 3 "
      "--gamma2 3 --diu-budget 3 --alpha 0.2";
  std::vector<std::string> bad;
  for (const char* name : {"a", "b"}) {
    if (cli("gen -o " + q(std::string(name) + ".inst") + small).code != 0) bad.push_back("gen failed");
    if (cli("gen -o " + q(std::string(name) + "_default.inst") + " --seed 5").code != 0)
      bad.push_back("gen failed");
  }
  if (slurp(dir / "a.inst") != slurp(dir / "b.inst")) bad.push_back("instance files differ");
  if (slurp(dir / "a_default.inst") != slurp(dir / "b_default.inst")) bad.push_back("default instance files differ");

  for (const char* f : {"det", "rddu", "erddu"}) {
    const auto args = std::string("solve ") + q("a.inst") + " -f " + f + " --seed 3 --gap 1e-9 -o ";
    auto r1 = cli(args + q(std::string(f) + "1.sol"));
    auto r2 = cli(args + q(std::string(f) + "2.sol"));
    if (r1.code != 0 || r2.code != 0) bad.push_back(std::string(f) + " solve failed");
    if (results(r1.out) != results(r2.out)) bad.push_back(std::string(f) + " reports differ");
    if (slurp(dir / (std::string(f) + "1.sol")) != slurp(dir / (std::string(f) + "2.sol")))
      bad.push_back(std::string(f) + " solution files differ");
  }
  for (const char* name : {"e1", "e2"}) {
    auto r = cli("evaluate " + q("a.inst") + " -N 20 --seed 9 --gap 1e-6 --out-dir " + q(name));
    if (r.code != 0) bad.push_back("evaluate failed");
  }
  for (const char* file : {"summary.csv", "costs.csv"})
    if (slurp(dir / "e1" / file) != slurp(dir / "e2" / file) || slurp(dir / "e1" / file).empty())
      bad.push_back(std::string("evaluate ") + file + " differs");
  std::string detail = "gen, solve (det, rddu, erddu) and evaluate repeated with equal seeds";
  for (const auto& b : bad) detail += "; " + b;
  return {bad.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"reformulations agree", equivalence},
      {"oracle certification", certification},
      {"degeneracy chain", degeneracy},
      {"linearization exactness", linearization},
      {"model size", model_size},
      {"trends at default scale", trends},
      {"runtime direction", runtime},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    fmt::print("{} criterion {} ({}): {} [{:.0f}s]\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail,
               seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
