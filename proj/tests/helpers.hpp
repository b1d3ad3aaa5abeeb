#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "edgeharden/formulations.hpp"
#include "edgeharden/instance.hpp"
#include "edgeharden/solver.hpp"

namespace testutil {

// One area, one node, one level with zero impact. Callers adjust fields.
inline edgeharden::Instance single_link(std::int64_t demand, std::int64_t capacity) {
  edgeharden::Instance inst;
  inst.num_areas = inst.num_nodes = inst.num_levels = 1;
  inst.demand = {demand};
  inst.capacity = {capacity};
  inst.unmet_penalty = {40.0};
  inst.delay_penalty = 0.1;
  inst.unmet_fraction_cap = {0.5};
  inst.delay_cap = {15.0};
  inst.budget = 0.0;
  inst.harden_cost = {1.0};
  inst.harden_impact = {0.0};
  inst.workload_impact = {0.0};
  inst.delay_min = {1.0};
  inst.delay_dev = {0.0};
  return inst;
}

// Small random instance whose models solve to optimality in well under a
// second: the default generator with demand and capacity scaled down.
inline edgeharden::Instance small(std::uint64_t seed, int areas = 3, int nodes = 3, int levels = 3,
                                  std::int64_t max_demand = 10) {
  edgeharden::GenConfig c;
  c.seed = seed;
  c.num_areas = areas;
  c.num_nodes = nodes;
  c.num_levels = levels;
  c.demand_range = {max_demand / 2, max_demand};
  c.capacity_pool = {max_demand / 2, max_demand, max_demand + max_demand / 2};
  c.budget = 3.0;
  c.uncertainty_budget_diu = c.uncertainty_budget_ddu = 3.0;
  c.unmet_fraction_cap = 0.2;
  return edgeharden::generate(c);
}

// Tight gap for checks that compare optima.
inline edgeharden::SolverConfig exact() {
  edgeharden::SolverConfig s;
  s.mip_gap = 1e-9;
  s.time_limit = 120.0;
  return s;
}

struct Solved {
  edgeharden::SolverResult result;
  edgeharden::Solution solution;
  edgeharden::ModelStats stats;
};

// Builds and solves; the solution is left empty without a solver point.
inline Solved run(const edgeharden::Instance& inst, edgeharden::Formulation f,
                  const edgeharden::SolverConfig& cfg = exact(),
                  const edgeharden::BuildOptions& opt = {},
                  const edgeharden::SdduScenarioSet* scen = nullptr) {
  auto built = edgeharden::build(inst, f, scen, opt);
  Solved s;
  s.stats = built.model.stats();
  s.result = edgeharden::solve(built.model, cfg);
  if (s.result.has_solution())
    s.solution = edgeharden::extract_solution(inst, built, s.result.values);
  return s;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("edgeharden_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
