#include "edgeharden/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "edgeharden/errors.hpp"

namespace edgeharden {

GreedyResult inner_max_greedy(std::span<const double> c, std::span<const double> ub, double budget) {
  if (c.size() != ub.size()) throw InvalidArgument("inner_max_greedy: size mismatch");
  if (!(budget >= 0.0)) throw InvalidArgument("inner_max_greedy: negative budget");
  for (std::size_t k = 0; k < c.size(); ++k)
    if (!(c[k] >= 0.0) || !(ub[k] >= 0.0))
      throw InvalidArgument(fmt::format("inner_max_greedy: negative entry at {}", k));
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return c[a] > c[b]; });
  GreedyResult r;
  r.g.assign(c.size(), 0.0);
  double left = budget;
  for (auto k : order) {
    if (left <= 0.0 || c[k] == 0.0) break;
    const double take = std::min(ub[k], left);
    r.g[k] = take;
    r.value += c[k] * take;
    left -= take;
  }
  return r;
}

std::vector<double> deviation_bounds(const Instance& inst, std::span<const int> t) {
  std::vector<double> ub(inst.num_links(), 1.0);
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j) {
      double b = 1.0;
      for (int r = 0; r < inst.num_levels; ++r)
        if (t[inst.level(i, j, r)]) b -= inst.gamma(i, j, r);
      ub[inst.link(i, j)] = std::max(b, 0.0);
    }
  return ub;
}

namespace {

void require_valid(const Instance& inst, const Solution& sol) {
  const auto problems = check_solution(inst, sol);
  if (!problems.empty()) throw CorruptSolution(problems.front());
}

double sq(double v) { return v * v; }

}  // namespace

double worst_case_cost(const Instance& inst, const Solution& sol) {
  require_valid(inst, sol);
  const auto ub = deviation_bounds(inst, sol.t);
  const double rho = inst.delay_penalty;
  double cost = hardening_payment(inst, sol.t);
  for (int i = 0; i < inst.num_areas; ++i)
    cost += inst.unmet_penalty[static_cast<std::size_t>(i)] * static_cast<double>(sol.w[static_cast<std::size_t>(i)]);
  std::vector<double> c(inst.num_links());
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j) {
      const auto l = inst.link(i, j);
      const double x = static_cast<double>(sol.x[l]);
      cost += rho * inst.dmin(i, j) * x + rho * inst.ddev(i, j) * inst.u(i, j) * sq(x);
      c[l] = rho * inst.ddev(i, j) * x;
    }
  return cost + inner_max_greedy(c, ub, inst.uncertainty_budget_ddu).value;
}

double worst_case_delay(const Instance& inst, const Solution& sol, int area) {
  require_valid(inst, sol);
  if (area < 0 || area >= inst.num_areas) throw InvalidArgument("worst_case_delay: area out of range");
  const double lam = static_cast<double>(inst.demand[static_cast<std::size_t>(area)]);
  if (lam == 0.0) return 0.0;
  const auto all_ub = deviation_bounds(inst, sol.t);
  double total = 0.0;
  std::vector<double> c, ub;
  for (int j = 0; j < inst.num_nodes; ++j) {
    const auto l = inst.link(area, j);
    const double x = static_cast<double>(sol.x[l]);
    total += inst.dmin(area, j) * x + inst.ddev(area, j) * inst.u(area, j) * sq(x);
    c.push_back(inst.ddev(area, j) * x);
    ub.push_back(all_ub[l]);
  }
  total += inner_max_greedy(c, ub, inst.uncertainty_budget_ddu).value;
  return total / lam;
}

Certificate certify(const Instance& inst, const Solution& sol, bool check_objective, double tol) {
  Certificate cert;
  cert.failures = check_solution(inst, sol);
  if (!cert.failures.empty()) {
    cert.pass = false;
    return cert;
  }
  cert.recomputed_cost = worst_case_cost(inst, sol);
  for (int i = 0; i < inst.num_areas; ++i) {
    const double d = worst_case_delay(inst, sol, i);
    cert.delays.push_back(d);
    if (d > inst.delay_cap[static_cast<std::size_t>(i)] + tol)
      cert.failures.push_back(fmt::format("delay_{}: worst-case delay {} exceeds cap {}", i, d,
                                          inst.delay_cap[static_cast<std::size_t>(i)]));
  }
  const double pay = hardening_payment(inst, sol.t);
  if (std::abs(pay - sol.hardening_payment) > 1e-9 * std::max(1.0, pay))
    cert.failures.push_back(fmt::format("hardening_payment: stored {} but t costs {}", sol.hardening_payment, pay));
  if (check_objective &&
      std::abs(sol.objective - cert.recomputed_cost) > tol * std::max(1.0, std::abs(cert.recomputed_cost)))
    cert.failures.push_back(fmt::format("objective: stored {} but worst-case cost is {}", sol.objective,
                                        cert.recomputed_cost));
  cert.pass = cert.failures.empty();
  return cert;
}

bool brute_force_allowed(const Instance& inst) {
  if (inst.num_areas * inst.num_nodes > 4 || inst.num_levels > 2) return false;
  return std::all_of(inst.demand.begin(), inst.demand.end(), [](auto d) { return d <= 6; });
}

namespace {

// Every t with at most one level per link and payment within budget, in
// lexicographic order of the flattened vector.
std::vector<std::vector<int>> hardening_plans(const Instance& inst) {
  const auto E = inst.num_links();
  const int R = inst.num_levels;
  std::vector<std::vector<int>> plans;
  std::vector<int> choice(E, 0);  // 0 = none, r+1 = level r
  while (true) {
    std::vector<int> t(E * static_cast<std::size_t>(R), 0);
    for (std::size_t l = 0; l < E; ++l)
      if (choice[l]) t[l * static_cast<std::size_t>(R) + static_cast<std::size_t>(choice[l] - 1)] = 1;
    if (hardening_payment(inst, t) <= inst.budget + 1e-9) plans.push_back(std::move(t));
    std::size_t l = 0;
    while (l < E && ++choice[l] > R) choice[l++] = 0;
    if (l == E) break;
  }
  std::sort(plans.begin(), plans.end());
  return plans;
}

// Every integral x meeting capacity, demand and unmet caps, in
// lexicographic order.
std::vector<std::vector<std::int64_t>> allocations(const Instance& inst) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> x(inst.num_links(), 0);
  const auto E = inst.num_links();
  auto feasible = [&]() {
    for (int j = 0; j < inst.num_nodes; ++j) {
      std::int64_t load = 0;
      for (int i = 0; i < inst.num_areas; ++i) load += x[inst.link(i, j)];
      if (load > inst.capacity[static_cast<std::size_t>(j)]) return false;
    }
    for (int i = 0; i < inst.num_areas; ++i) {
      std::int64_t served = 0;
      for (int j = 0; j < inst.num_nodes; ++j) served += x[inst.link(i, j)];
      const auto unmet = inst.demand[static_cast<std::size_t>(i)] - served;
      if (unmet < 0 || unmet > inst.max_unmet(i)) return false;
    }
    return true;
  };
  while (true) {
    if (feasible()) out.push_back(x);
    std::size_t k = E;
    // Increment like an odometer with the last link fastest.
    while (k > 0) {
      --k;
      const int i = static_cast<int>(k) / inst.num_nodes;
      const int j = static_cast<int>(k) % inst.num_nodes;
      if (++x[k] <= inst.alloc_bound(i, j)) break;
      x[k] = 0;
      if (k == 0) return out;
    }
    if (E == 0) return out;
  }
}

}  // namespace

std::optional<Solution> brute_force_optimal(const Instance& inst) {
  if (!brute_force_allowed(inst))
    throw InvalidArgument("brute_force_optimal: instance exceeds I*J <= 4, demand <= 6, R <= 2");
  const auto plans = hardening_plans(inst);
  const auto xs = allocations(inst);
  std::optional<Solution> best;
  Solution cand = empty_solution(inst);
  cand.formulation = "oracle";
  for (const auto& t : plans) {
    cand.t = t;
    for (const auto& x : xs) {
      cand.x = x;
      for (int i = 0; i < inst.num_areas; ++i) {
        std::int64_t served = 0;
        for (int j = 0; j < inst.num_nodes; ++j) served += x[inst.link(i, j)];
        cand.w[static_cast<std::size_t>(i)] = inst.demand[static_cast<std::size_t>(i)] - served;
      }
      bool ok = true;
      for (int i = 0; i < inst.num_areas && ok; ++i)
        ok = worst_case_delay(inst, cand, i) <= inst.delay_cap[static_cast<std::size_t>(i)] + 1e-9;
      if (!ok) continue;
      const double cost = worst_case_cost(inst, cand);
      if (!best || cost < best->objective - 1e-12 * std::max(1.0, std::abs(best->objective))) {
        cand.objective = cost;
        best = cand;
      }
    }
  }
  if (best) {
    best->hardening_payment = hardening_payment(inst, best->t);
    best->allocation_cost = best->objective - best->hardening_payment;
  }
  return best;
}

}  // namespace edgeharden
