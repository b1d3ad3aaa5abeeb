#include "edgeharden/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "edgeharden/errors.hpp"
#include "edgeharden/oracle.hpp"
#include "edgeharden/rng.hpp"

namespace edgeharden {

std::vector<Scenario> sample_scenarios(const Instance& inst, std::span<const int> t, int n,
                                       std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("scenario count must be positive");
  const auto ub = deviation_bounds(inst, t);
  const double budget = inst.uncertainty_budget_ddu;
  RandomStream rng(seed, streams::scenarios);
  std::vector<Scenario> out(static_cast<std::size_t>(n));
  for (auto& s : out) {
    s.g.resize(ub.size());
    double total = 0.0;
    for (std::size_t l = 0; l < ub.size(); ++l) {
      s.g[l] = rng.uniform01() * ub[l];
      total += s.g[l];
    }
    if (total > budget) {
      const double f = budget / total;
      for (auto& g : s.g) g *= f;
    }
    // Scaling can leave the sum a rounding error above the budget.
    total = std::accumulate(s.g.begin(), s.g.end(), 0.0);
    for (std::size_t l = 0; l < ub.size(); ++l)
      if (s.g[l] < 0.0 || s.g[l] > ub[l] || total > budget * (1 + 1e-12) + 1e-12)
        throw Error(fmt::format("sampled scenario breaks its bounds at link {}", l));
  }
  return out;
}

double actual_cost(const Instance& inst, std::span<const int> t, std::span<const std::int64_t> x,
                   std::span<const std::int64_t> w, const Scenario& s) {
  double cost = hardening_payment(inst, t);
  for (int i = 0; i < inst.num_areas; ++i) {
    cost += inst.unmet_penalty[static_cast<std::size_t>(i)] * static_cast<double>(w[static_cast<std::size_t>(i)]);
    for (int j = 0; j < inst.num_nodes; ++j) {
      const auto l = inst.link(i, j);
      const double xv = static_cast<double>(x[l]);
      const double d = inst.dmin(i, j) + inst.ddev(i, j) * (s.g[l] + inst.u(i, j) * xv);
      cost += inst.delay_penalty * d * xv;
    }
  }
  return cost;
}

Allocation actual_allocation(const Instance& inst, std::span<const int> t, const Scenario& s,
                             const SolverConfig& solver) {
  const BuiltModel b = build_actual(inst, t, s.g);
  const SolverResult res = solve(b.model, solver);
  Allocation a;
  if (res.status == SolveStatus::infeasible) {
    a.x.assign(inst.num_links(), 0);
    a.w = inst.demand;
    a.feasible = false;
    a.note = "delay or unmet caps unattainable; all demand dropped";
  } else if (res.has_solution()) {
    const Solution sol = extract_solution(inst, b, res.values);
    a.x = sol.x;
    a.w = sol.w;
  } else {
    throw Error(fmt::format("allocation solve failed: {} {}", status_name(res.status), res.message));
  }
  a.cost = actual_cost(inst, t, a.x, a.w, s);
  return a;
}

std::vector<int> rand_hardening(const Instance& inst, std::uint64_t seed) {
  RandomStream rng(seed, streams::rand_hardening);
  std::vector<int> t(inst.num_links() * static_cast<std::size_t>(inst.num_levels), 0);
  std::vector<bool> hardened(inst.num_links(), false);
  double left = inst.budget;
  while (true) {
    std::vector<std::size_t> options;
    for (std::size_t l = 0; l < inst.num_links(); ++l) {
      if (hardened[l]) continue;
      for (int r = 0; r < inst.num_levels; ++r) {
        const auto k = l * static_cast<std::size_t>(inst.num_levels) + static_cast<std::size_t>(r);
        if (inst.harden_cost[k] <= left + 1e-12) options.push_back(k);
      }
    }
    if (options.empty()) break;
    const auto k = options[rng.index(options.size())];
    t[k] = 1;
    hardened[k / static_cast<std::size_t>(inst.num_levels)] = true;
    left -= inst.harden_cost[k];
  }
  return t;
}

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::nh: return "NH";
    case Scheme::rand: return "RAND";
    case Scheme::sddu: return "SDDU";
    case Scheme::rddu: return "RDDU";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "nh") return Scheme::nh;
  if (lower == "rand") return Scheme::rand;
  if (lower == "sddu") return Scheme::sddu;
  if (lower == "rddu") return Scheme::rddu;
  throw InvalidArgument(fmt::format("unknown scheme '{}'", name));
}

Stats summarize(std::span<const double> values) {
  Stats s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto pct = [&](double p) {
    const double h = (n - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  s.p5 = pct(0.05);
  s.p95 = pct(0.95);
  return s;
}

const SchemeReport* EvaluationReport::find(Scheme s) const {
  for (const auto& r : schemes)
    if (r.scheme == s) return &r;
  return nullptr;
}

namespace {

// Hardening plan of one scheme; the planning objective is 0 for schemes
// that do not solve a model.
std::vector<int> plan(const Instance& inst, Scheme scheme, std::uint64_t seed,
                      const EvaluationConfig& cfg, double& objective) {
  objective = 0.0;
  switch (scheme) {
    case Scheme::nh: return std::vector<int>(inst.num_links() * static_cast<std::size_t>(inst.num_levels), 0);
    case Scheme::rand: return rand_hardening(inst, seed);
    case Scheme::sddu:
    case Scheme::rddu: {
      const SdduScenarioSet scen = make_sddu_scenarios(cfg.sddu_scenarios, seed);
      const BuiltModel b = scheme == Scheme::rddu ? build_rddu(inst) : build_sddu(inst, scen);
      const SolverResult res = solve(b.model, cfg.planning);
      if (!res.has_solution())
        throw Error(fmt::format("{} planning solve: {} {}", scheme_name(scheme),
                                status_name(res.status), res.message));
      objective = res.objective;
      return extract_solution(inst, b, res.values).t;
    }
  }
  return {};
}

}  // namespace

EvaluationReport compare_schemes(const Instance& inst, int n, std::uint64_t seed,
                                 std::span<const Scheme> schemes, const EvaluationConfig& cfg) {
  if (n < 1) throw InvalidArgument("scenario count must be positive");
  EvaluationReport report;
  report.scenarios = n;
  report.seed = seed;
  for (Scheme scheme : schemes) {
    SchemeReport r;
    r.scheme = scheme;
    try {
      r.t = plan(inst, scheme, seed, cfg, r.plan_objective);
      r.payment = hardening_payment(inst, r.t);
      r.scenarios = sample_scenarios(inst, r.t, n, seed);
      for (const auto& s : r.scenarios) {
        r.allocations.push_back(actual_allocation(inst, r.t, s, cfg.allocation));
        r.costs.push_back(r.allocations.back().cost);
        if (!r.allocations.back().feasible) ++r.infeasible;
      }
      r.stats = summarize(r.costs);
      r.ok = true;
    } catch (const Error& e) {
      r.ok = false;
      r.error = e.what();
    }
    report.schemes.push_back(std::move(r));
  }
  return report;
}

std::string report_summary_csv(const EvaluationReport& report) {
  std::string out = "scheme,ok,payment,mean,stddev,p5,p95,infeasible,n,error\n";
  for (const auto& r : report.schemes) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out += fmt::format("{},{},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{},{},{}\n", scheme_name(r.scheme),
                       r.ok ? 1 : 0, r.payment, r.stats.mean, r.stats.stddev, r.stats.p5, r.stats.p95,
                       r.infeasible, r.costs.size(), err);
  }
  return out;
}

std::string report_costs_csv(const EvaluationReport& report) {
  std::string out = "scheme,scenario,cost,feasible\n";
  for (const auto& r : report.schemes)
    for (std::size_t k = 0; k < r.costs.size(); ++k)
      out += fmt::format("{},{},{:.17g},{}\n", scheme_name(r.scheme), k, r.costs[k],
                         r.allocations[k].feasible ? 1 : 0);
  return out;
}

std::string_view sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::budget: return "B";
    case SweepParam::psi: return "psi";
    case SweepParam::gamma2: return "gamma2";
    case SweepParam::rho: return "rho";
    case SweepParam::dgamma: return "dgamma";
    case SweepParam::gamma1: return "gamma1";
    case SweepParam::u: return "u";
    case SweepParam::delta: return "delta";
    case SweepParam::areas: return "I";
    case SweepParam::nodes: return "J";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
  for (auto p : {SweepParam::budget, SweepParam::psi, SweepParam::gamma2, SweepParam::rho,
                 SweepParam::dgamma, SweepParam::gamma1, SweepParam::u, SweepParam::delta,
                 SweepParam::areas, SweepParam::nodes})
    if (sweep_param_name(p) == name) return p;
  throw InvalidArgument(fmt::format(
      "unknown sweep parameter '{}' (expected B, psi, gamma2, rho, dgamma, gamma1, u, delta, I, J)", name));
}

Instance apply_sweep_value(const Instance& base, SweepParam p, double value) {
  if (!std::isfinite(value)) throw InvalidArgument("sweep value must be finite");
  Instance inst = base;
  auto count = [&]() {
    if (value < 1 || value != std::floor(value))
      throw InvalidArgument(fmt::format("{} must be a positive integer", sweep_param_name(p)));
    return static_cast<int>(value);
  };
  auto levels = [&](auto first, auto step) {
    for (int i = 0; i < inst.num_areas; ++i)
      for (int j = 0; j < inst.num_nodes; ++j) {
        const double g1 = first(i, j);
        const double d = step(i, j);
        for (int r = 0; r < inst.num_levels; ++r) inst.harden_impact[inst.level(i, j, r)] = g1 + r * d;
      }
  };
  auto step_of = [&](int i, int j) {
    return base.num_levels > 1 ? base.gamma(i, j, 1) - base.gamma(i, j, 0) : 0.0;
  };
  switch (p) {
    case SweepParam::budget: inst.budget = value; break;
    case SweepParam::psi:
      if (!(value > 0)) throw InvalidArgument("psi must be positive");
      for (auto& h : inst.harden_cost) h *= value;
      break;
    case SweepParam::gamma2: inst.uncertainty_budget_ddu = value; break;
    case SweepParam::rho: inst.delay_penalty = value; break;
    case SweepParam::dgamma:
      levels([&](int i, int j) { return base.gamma(i, j, 0); }, [&](int, int) { return value; });
      break;
    case SweepParam::gamma1:
      levels([&](int, int) { return value; }, step_of);
      break;
    case SweepParam::u: std::fill(inst.workload_impact.begin(), inst.workload_impact.end(), value); break;
    case SweepParam::delta: std::fill(inst.delay_cap.begin(), inst.delay_cap.end(), value); break;
    case SweepParam::areas:
      if (count() > base.num_areas) throw InvalidArgument("I exceeds the instance's area count");
      inst = sub_instance(base, count(), base.num_nodes);
      break;
    case SweepParam::nodes:
      if (count() > base.num_nodes) throw InvalidArgument("J exceeds the instance's node count");
      inst = sub_instance(base, base.num_areas, count());
      break;
  }
  const auto problems = validate(inst);
  if (!problems.empty())
    throw InvalidArgument(fmt::format("{} = {} gives an invalid instance: {}", sweep_param_name(p), value,
                                      problems.front()));
  return inst;
}

namespace {

// Direction along the grid in which an optimal plan stays feasible for the
// next value (and costs no more there): +1 ascending, -1 descending, 0 when
// the model shape changes.
int carry_direction(SweepParam p) {
  switch (p) {
    case SweepParam::budget:
    case SweepParam::rho:
    case SweepParam::dgamma:
    case SweepParam::gamma1:
    case SweepParam::delta: return 1;
    case SweepParam::psi:
    case SweepParam::gamma2:
    case SweepParam::u: return -1;
    case SweepParam::areas:
    case SweepParam::nodes: return 0;
  }
  return 0;
}

// Integer part of `values` keyed by variable name.
std::unordered_map<std::string, double> integer_values(const MilpModel& m, std::span<const double> values) {
  std::unordered_map<std::string, double> out;
  for (std::size_t k = 0; k < m.num_vars(); ++k)
    if (m.variables()[k].kind != VarKind::continuous) out.emplace(m.variables()[k].name, values[k]);
  return out;
}

}  // namespace

std::vector<SweepPoint> sweep(const Instance& base, SweepParam p, std::span<const double> grid,
                              std::span<const Formulation> formulations, const SolverConfig& solver,
                              bool warm_start) {
  if (grid.empty()) throw InvalidArgument("sweep grid is empty");
  for (double v : grid)
    if (!std::isfinite(v)) throw InvalidArgument("sweep grid values must be finite");
  for (auto f : formulations)
    if (f == Formulation::sddu || f == Formulation::actual)
      throw InvalidArgument(fmt::format("sweep does not support formulation {}", formulation_name(f)));

  std::vector<Instance> insts;
  for (double v : grid) insts.push_back(apply_sweep_value(base, p, v));
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const int dir = warm_start ? carry_direction(p) : 0;
  if (dir != 0)
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dir > 0 ? grid[a] < grid[b] : grid[a] > grid[b];
    });

  std::vector<SweepPoint> out(grid.size() * formulations.size());
  for (std::size_t fi = 0; fi < formulations.size(); ++fi) {
    const Formulation f = formulations[fi];
    std::unordered_map<std::string, double> carried;
    for (std::size_t gi : order) {
      const Instance& inst = insts[gi];
      const BuiltModel b = build(inst, f);
      SolverConfig cfg = solver;
      cfg.start.clear();
      if (!carried.empty()) {
        cfg.start.assign(b.model.num_vars(), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t k = 0; k < b.model.num_vars(); ++k)
          if (auto it = carried.find(b.model.variables()[k].name); it != carried.end()) cfg.start[k] = it->second;
      }
      const SolverResult res = solve(b.model, cfg);
      SweepPoint& pt = out[gi * formulations.size() + fi];
      pt.value = grid[gi];
      pt.formulation = f;
      pt.status = res.status;
      pt.runtime = res.runtime;
      pt.stats = b.model.stats();
      if (res.has_solution()) {
        const Solution sol = extract_solution(inst, b, res.values);
        pt.total_cost = sol.objective;
        pt.payment = sol.hardening_payment;
        if (dir != 0) carried = integer_values(b.model, res.values);
      }
    }
  }
  return out;
}

std::string sweep_csv(SweepParam p, std::span<const SweepPoint> points) {
  std::vector<Formulation> forms;
  std::vector<double> values;
  for (const auto& pt : points) {
    if (std::find(forms.begin(), forms.end(), pt.formulation) == forms.end()) forms.push_back(pt.formulation);
    if (std::find(values.begin(), values.end(), pt.value) == values.end()) values.push_back(pt.value);
  }
  std::string out(sweep_param_name(p));
  for (auto f : forms) {
    const auto n = formulation_name(f);
    out += fmt::format(",{0}_status,{0}_cost,{0}_payment,{0}_runtime,{0}_rows,{0}_cols", n);
  }
  out += '\n';
  for (double v : values) {
    out += fmt::format("{:.10g}", v);
    for (auto f : forms) {
      auto it = std::find_if(points.begin(), points.end(),
                             [&](const SweepPoint& pt) { return pt.value == v && pt.formulation == f; });
      if (it == points.end()) {
        out += ",,,,,,";
        continue;
      }
      out += fmt::format(",{},{:.10g},{:.10g},{:.4f},{},{}", status_name(it->status), it->total_cost,
                         it->payment, it->runtime, it->stats.rows, it->stats.cols);
    }
    out += '\n';
  }
  return out;
}

std::string sweep_long_csv(SweepParam p, std::span<const SweepPoint> points) {
  std::string out = "param,value,formulation,metric,measure\n";
  for (const auto& pt : points) {
    const auto f = formulation_name(pt.formulation);
    const auto n = sweep_param_name(p);
    out += fmt::format("{},{:.10g},{},total_cost,{:.10g}\n", n, pt.value, f, pt.total_cost);
    out += fmt::format("{},{:.10g},{},payment,{:.10g}\n", n, pt.value, f, pt.payment);
    out += fmt::format("{},{:.10g},{},runtime,{:.4f}\n", n, pt.value, f, pt.runtime);
    out += fmt::format("{},{:.10g},{},rows,{}\n", n, pt.value, f, pt.stats.rows);
  }
  return out;
}

}  // namespace edgeharden
