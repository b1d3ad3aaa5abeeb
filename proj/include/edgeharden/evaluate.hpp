#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgeharden/formulations.hpp"
#include "edgeharden/instance.hpp"
#include "edgeharden/milp.hpp"
#include "edgeharden/solver.hpp"

namespace edgeharden {

/// Realized deviation fractions g per link.
struct Scenario {
  std::vector<double> g;
};

/// N scenarios for hardening `t`: g = U * ub with U ~ U[0, 1] per link, then
/// scaled down uniformly when sum g exceeds the budget. The uniforms depend
/// only on (seed, n, link), so plans sampled with the same seed share them.
/// Throws InvalidArgument when n < 1.
std::vector<Scenario> sample_scenarios(const Instance& inst, std::span<const int> t, int n,
                                       std::uint64_t seed);

struct Allocation {
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> w;
  double cost = 0.0;       // including the hardening payment
  bool feasible = true;    // false: no allocation met the caps
  std::string note;
};

/// Total cost of hardening `t` and allocation (x, w) under scenario `s`.
double actual_cost(const Instance& inst, std::span<const int> t, std::span<const std::int64_t> x,
                   std::span<const std::int64_t> w, const Scenario& s);

/// Re-optimizes the allocation for a realized scenario. When the caps cannot
/// be met, everything is left unserved and the result is flagged. Solver
/// errors throw.
Allocation actual_allocation(const Instance& inst, std::span<const int> t, const Scenario& s,
                             const SolverConfig& solver);

/// Hardens random affordable (link, level) pairs, one level per link, until
/// nothing affordable remains.
std::vector<int> rand_hardening(const Instance& inst, std::uint64_t seed);

enum class Scheme { nh, rand, sddu, rddu };
std::string_view scheme_name(Scheme s);
/// Throws InvalidArgument on an unknown name.
Scheme parse_scheme(std::string_view name);

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one value
  double p5 = 0.0;
  double p95 = 0.0;
};
/// Percentiles interpolate linearly between order statistics.
Stats summarize(std::span<const double> values);

struct SchemeReport {
  Scheme scheme = Scheme::nh;
  bool ok = false;
  std::string error;
  std::vector<int> t;
  double payment = 0.0;
  double plan_objective = 0.0;
  std::vector<Scenario> scenarios;
  std::vector<Allocation> allocations;
  std::vector<double> costs;
  int infeasible = 0;
  Stats stats;
};

struct EvaluationReport {
  int scenarios = 0;
  std::uint64_t seed = 0;
  std::vector<SchemeReport> schemes;

  const SchemeReport* find(Scheme s) const;
};

struct EvaluationConfig {
  SolverConfig planning;      // solves for the SDDU and RDDU plans
  SolverConfig allocation;    // per-scenario re-optimization
  int sddu_scenarios = 5;
};

/// Plans each scheme, samples its own scenarios with common random numbers
/// and re-optimizes the allocation per scenario. A failing scheme is flagged
/// and the others still run.
EvaluationReport compare_schemes(const Instance& inst, int n, std::uint64_t seed,
                                 std::span<const Scheme> schemes, const EvaluationConfig& config);

/// One row per scheme: scheme,ok,payment,mean,stddev,p5,p95,infeasible,n.
std::string report_summary_csv(const EvaluationReport& report);
/// Long format: scheme,scenario,cost,feasible.
std::string report_costs_csv(const EvaluationReport& report);

enum class SweepParam { budget, psi, gamma2, rho, dgamma, gamma1, u, delta, areas, nodes };
std::string_view sweep_param_name(SweepParam p);
/// Names: B, psi, gamma2, rho, dgamma, gamma1, u, delta, I, J.
SweepParam parse_sweep_param(std::string_view name);

/// Copy of `base` with one parameter set to `value`. psi multiplies the
/// hardening costs; dgamma and gamma1 rebuild the level impacts from the
/// first level and the current step; I and J keep the leading areas or
/// nodes. Throws InvalidArgument when the result breaks an invariant.
Instance apply_sweep_value(const Instance& base, SweepParam p, double value);

struct SweepPoint {
  double value = 0.0;
  Formulation formulation = Formulation::rddu;
  SolveStatus status = SolveStatus::error;
  double total_cost = 0.0;
  double payment = 0.0;
  double runtime = 0.0;
  ModelStats stats;
};

/// Solves each formulation at every grid value. With `warm_start`, values are
/// visited in the direction where the previous plan stays feasible (B, rho,
/// dgamma, gamma1, delta ascending; psi, gamma2, u descending) and that plan
/// seeds the next solve. Points come back in grid order.
std::vector<SweepPoint> sweep(const Instance& base, SweepParam p, std::span<const double> grid,
                              std::span<const Formulation> formulations, const SolverConfig& solver,
                              bool warm_start = true);

/// Wide table: one row per grid value with cost, payment, runtime and rows
/// per formulation.
std::string sweep_csv(SweepParam p, std::span<const SweepPoint> points);
/// Long format: param,value,formulation,metric,measure.
std::string sweep_long_csv(SweepParam p, std::span<const SweepPoint> points);

}  // namespace edgeharden
