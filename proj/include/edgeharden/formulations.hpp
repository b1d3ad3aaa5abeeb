#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgeharden/instance.hpp"
#include "edgeharden/milp.hpp"

namespace edgeharden {

enum class Formulation { det, nh, ro_nh, rddu, erddu, sddu, actual };

std::string_view formulation_name(Formulation f);
/// Accepts det, nh, ro-nh, rddu, erddu, sddu. Throws InvalidConfig otherwise;
/// the allocation model for a realized scenario is not selectable by name.
Formulation parse_formulation(std::string_view name);

/// Sampled delay multipliers for the stochastic benchmark.
struct SdduScenarioSet {
  std::vector<double> draws;  // in [0, 1]
  std::vector<double> probs;  // sum to 1
};

/// N draws from U[0, 1] with equal weights. Throws InvalidConfig when n < 1.
SdduScenarioSet make_sddu_scenarios(int n, std::uint64_t seed);

/// A model plus handles to the variables a Solution is read from. For the
/// stochastic model, x and w are those of the first scenario.
struct BuiltModel {
  Formulation kind = Formulation::det;
  MilpModel model;
  std::vector<VarRef> t;  // I*J*R, empty without hardening decisions
  std::vector<VarRef> x;  // I*J
  std::vector<VarRef> w;  // I
  std::optional<VarRef> eta;
};

/// Valid inequalities added on top of the exact model: tangents of x^2 at
/// integer points and a one-active-level row per hardening product block.
/// They leave the integer feasible set unchanged and only tighten the
/// relaxation; switch them off to get the bare row families.
struct BuildOptions {
  bool valid_cuts = true;
};

BuiltModel build_det(const Instance& inst);
BuiltModel build_nh(const Instance& inst);
BuiltModel build_ro_nh(const Instance& inst);
BuiltModel build_rddu(const Instance& inst, const BuildOptions& opt = {});
BuiltModel build_erddu(const Instance& inst, const BuildOptions& opt = {});
BuiltModel build_sddu(const Instance& inst, const SdduScenarioSet& scenarios,
                      const BuildOptions& opt = {});

/// Allocation re-optimization for hardening `t` and realized deviation
/// fractions `g` (per link): delay d = d̄ + d̂ (g + u x) in both the cost and
/// the delay caps. The objective excludes the hardening payment.
BuiltModel build_actual(const Instance& inst, std::span<const int> t, std::span<const double> g,
                        const BuildOptions& opt = {});

/// Builds `f`; the stochastic model uses `scenarios`, which must then be set.
BuiltModel build(const Instance& inst, Formulation f,
                 const SdduScenarioSet* scenarios = nullptr, const BuildOptions& opt = {});

struct Solution {
  std::string formulation;
  int num_areas = 0;
  int num_nodes = 0;
  int num_levels = 0;
  std::vector<int> t;            // I*J*R
  std::vector<std::int64_t> x;   // I*J
  std::vector<std::int64_t> w;   // I
  double objective = 0.0;
  double hardening_payment = 0.0;
  double allocation_cost = 0.0;  // objective minus payment

  bool operator==(const Solution&) const = default;
};

/// All-zero hardening with everything unserved; a starting point for
/// hand-built solutions.
Solution empty_solution(const Instance& inst);

/// Rounds integral values (tolerance 1e-6), checks the deterministic
/// constraints and recomputes the payment. Throws CorruptSolution naming the
/// offending variable or row.
Solution extract_solution(const Instance& inst, const BuiltModel& built,
                          std::span<const double> values);

/// Deterministic constraints violated by `sol` (shape, levels, budget,
/// capacity, demand, unmet cap). Delay rows are the oracle's concern.
std::vector<std::string> check_solution(const Instance& inst, const Solution& sol);

double hardening_payment(const Instance& inst, std::span<const int> t);

std::string solution_to_text(const Solution& sol);
Solution solution_from_text(const std::string& text, std::vector<std::string>* warnings = nullptr);
void save_solution(const Solution& sol, const std::filesystem::path& path);
Solution load_solution(const std::filesystem::path& path,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace edgeharden
