#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgeharden/formulations.hpp"
#include "edgeharden/instance.hpp"

namespace edgeharden {

struct GreedyResult {
  std::vector<double> g;
  double value = 0.0;
};

/// Exact optimum of max c'g s.t. sum g <= budget, 0 <= g <= ub by filling
/// the largest coefficients first (ties by lower index). Throws
/// InvalidArgument on negative or mismatched inputs.
GreedyResult inner_max_greedy(std::span<const double> c, std::span<const double> ub, double budget);

/// Per-link deviation bound 1 - sum_r gamma t, clamped at 0.
std::vector<double> deviation_bounds(const Instance& inst, std::span<const int> t);

/// Hardening payment plus the largest allocation cost over the
/// decision-dependent set. Throws CorruptSolution when `sol` breaks a
/// deterministic constraint.
double worst_case_cost(const Instance& inst, const Solution& sol);

/// Largest average delay of area i over the same set; 0 when the area has
/// no demand.
double worst_case_delay(const Instance& inst, const Solution& sol, int area);

struct Certificate {
  bool pass = true;
  double recomputed_cost = 0.0;
  std::vector<double> delays;  // per area
  std::vector<std::string> failures;
};

/// Re-verifies a solution without trusting the model: deterministic rows,
/// worst-case delay caps and, when `check_objective`, the stored objective
/// against the recomputed worst-case cost (relative tolerance `tol`).
Certificate certify(const Instance& inst, const Solution& sol, bool check_objective,
                    double tol = 1e-6);

/// Search-space guard for brute_force_optimal.
bool brute_force_allowed(const Instance& inst);

/// Minimum worst-case cost over every budget-feasible hardening and every
/// integral allocation meeting the delay caps in the worst case. Ties keep
/// the lexicographically first (t, x). Empty when nothing is feasible.
/// Throws InvalidArgument when the instance exceeds the guard
/// (I*J <= 4, demand <= 6, R <= 2).
std::optional<Solution> brute_force_optimal(const Instance& inst);

}  // namespace edgeharden
