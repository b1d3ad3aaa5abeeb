#include "edgeharden/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "edgeharden/errors.hpp"
#include "edgeharden/rng.hpp"
#include "edgeharden/textfile.hpp"

namespace edgeharden {

std::int64_t Instance::alloc_bound(int i, int j) const {
  return std::min(capacity[static_cast<std::size_t>(j)], demand[static_cast<std::size_t>(i)]);
}

std::int64_t Instance::max_unmet(int i) const {
  const auto k = static_cast<std::size_t>(i);
  // The epsilon keeps e.g. 0.05 * 40 from flooring to 1.
  return static_cast<std::int64_t>(
      std::floor(unmet_fraction_cap[k] * static_cast<double>(demand[k]) + 1e-9));
}

std::vector<std::string> check_config(const GenConfig& c) {
  std::vector<std::string> out;
  auto range = [&](const char* name, double lo, double hi, double min_lo) {
    if (!(lo <= hi)) out.push_back(fmt::format("{}: empty range [{}, {}]", name, lo, hi));
    if (lo < min_lo) out.push_back(fmt::format("{}: lower end {} below {}", name, lo, min_lo));
  };
  if (c.num_areas < 1) out.push_back("num_areas must be >= 1");
  if (c.num_nodes < 1) out.push_back("num_nodes must be >= 1");
  if (c.num_levels < 1) out.push_back("num_levels must be >= 1");
  range("demand_range", static_cast<double>(c.demand_range.first),
        static_cast<double>(c.demand_range.second), 0.0);
  range("penalty_range", c.penalty_range.first, c.penalty_range.second, 0.0);
  range("base_harden_cost_range", c.base_harden_cost_range.first,
        c.base_harden_cost_range.second, 0.0);
  range("delay_min_range", c.delay_min_range.first, c.delay_min_range.second, 0.0);
  range("delay_dev_range", c.delay_dev_range.first, c.delay_dev_range.second, 0.0);
  if (c.num_levels > 1 && !(c.delta_h > 0)) out.push_back("delta_h must be > 0");
  if (c.num_levels > 1 && !(c.delta_gamma > 0)) out.push_back("delta_gamma must be > 0");
  if (!(c.gamma_level1 >= 0)) out.push_back("gamma_level1 must be >= 0");
  const double top = c.gamma_level1 + (c.num_levels - 1) * c.delta_gamma;
  if (!(top < 1.0))
    out.push_back(fmt::format(
        "top-level impact gamma_level1 + (R-1)*delta_gamma = {} must be < 1", top));
  if (!(c.psi > 0)) out.push_back("psi must be > 0");
  if (c.capacity_pool.empty()) out.push_back("capacity_pool is empty");
  for (auto cap : c.capacity_pool)
    if (cap < 0) out.push_back(fmt::format("capacity_pool entry {} is negative", cap));
  if (!(c.u_uniform >= 0)) out.push_back("u must be >= 0");
  if (!(c.delay_penalty >= 0)) out.push_back("delay_penalty must be >= 0");
  if (!(c.unmet_fraction_cap >= 0 && c.unmet_fraction_cap <= 1))
    out.push_back("unmet_fraction_cap must lie in [0, 1]");
  if (!(c.delay_cap >= 0)) out.push_back("delay_cap must be >= 0");
  if (!(c.budget >= 0)) out.push_back("budget must be >= 0");
  if (!(c.uncertainty_budget_diu >= 0)) out.push_back("uncertainty_budget_diu must be >= 0");
  if (!(c.uncertainty_budget_ddu >= 0)) out.push_back("uncertainty_budget_ddu must be >= 0");
  return out;
}

Instance generate(const GenConfig& c) {
  if (auto problems = check_config(c); !problems.empty()) {
    std::string msg = "invalid generator config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw InvalidConfig(msg);
  }

  Instance inst;
  inst.num_areas = c.num_areas;
  inst.num_nodes = c.num_nodes;
  inst.num_levels = c.num_levels;
  const auto I = static_cast<std::size_t>(c.num_areas);
  const auto J = static_cast<std::size_t>(c.num_nodes);
  const auto R = static_cast<std::size_t>(c.num_levels);

  RandomStream demand_rng(c.seed, streams::demand);
  for (std::size_t i = 0; i < I; ++i)
    inst.demand.push_back(demand_rng.uniform_int(c.demand_range.first, c.demand_range.second));

  RandomStream cap_rng(c.seed, streams::capacity);
  for (std::size_t j = 0; j < J; ++j)
    inst.capacity.push_back(c.capacity_pool[cap_rng.index(c.capacity_pool.size())]);

  RandomStream pen_rng(c.seed, streams::unmet_penalty);
  for (std::size_t i = 0; i < I; ++i)
    inst.unmet_penalty.push_back(pen_rng.uniform(c.penalty_range.first, c.penalty_range.second));

  inst.delay_penalty = c.delay_penalty;
  inst.unmet_fraction_cap.assign(I, c.unmet_fraction_cap);
  inst.delay_cap.assign(I, c.delay_cap);
  inst.budget = c.budget;

  RandomStream h_rng(c.seed, streams::harden_base);
  inst.harden_cost.reserve(I * J * R);
  inst.harden_impact.reserve(I * J * R);
  for (std::size_t l = 0; l < I * J; ++l) {
    const double base =
        h_rng.uniform(c.base_harden_cost_range.first, c.base_harden_cost_range.second);
    for (std::size_t r = 0; r < R; ++r) {
      inst.harden_cost.push_back(c.psi * (base + static_cast<double>(r) * c.delta_h));
      inst.harden_impact.push_back(c.gamma_level1 + static_cast<double>(r) * c.delta_gamma);
    }
  }

  inst.workload_impact.assign(I * J, c.u_uniform);
  RandomStream dmin_rng(c.seed, streams::delay_min);
  RandomStream ddev_rng(c.seed, streams::delay_dev);
  for (std::size_t l = 0; l < I * J; ++l) {
    inst.delay_min.push_back(dmin_rng.uniform(c.delay_min_range.first, c.delay_min_range.second));
    inst.delay_dev.push_back(ddev_rng.uniform(c.delay_dev_range.first, c.delay_dev_range.second));
  }
  inst.uncertainty_budget_diu = c.uncertainty_budget_diu;
  inst.uncertainty_budget_ddu = c.uncertainty_budget_ddu;
  return inst;
}

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  if (inst.num_areas < 1) out.push_back("num_areas: must be >= 1");
  if (inst.num_nodes < 1) out.push_back("num_nodes: must be >= 1");
  if (inst.num_levels < 1) out.push_back("num_levels: must be >= 1");
  if (!out.empty()) return out;

  const std::size_t I = static_cast<std::size_t>(inst.num_areas);
  const std::size_t J = static_cast<std::size_t>(inst.num_nodes);
  const std::size_t E = inst.num_links();
  const std::size_t ER = E * static_cast<std::size_t>(inst.num_levels);
  auto dim = [&](const char* name, std::size_t have, std::size_t want) {
    if (have != want) out.push_back(fmt::format("{}: has {} entries, expected {}", name, have, want));
  };
  dim("demand", inst.demand.size(), I);
  dim("capacity", inst.capacity.size(), J);
  dim("unmet_penalty", inst.unmet_penalty.size(), I);
  dim("unmet_fraction_cap", inst.unmet_fraction_cap.size(), I);
  dim("delay_cap", inst.delay_cap.size(), I);
  dim("harden_cost", inst.harden_cost.size(), ER);
  dim("harden_impact", inst.harden_impact.size(), ER);
  dim("workload_impact", inst.workload_impact.size(), E);
  dim("delay_min", inst.delay_min.size(), E);
  dim("delay_dev", inst.delay_dev.size(), E);
  if (!out.empty()) return out;

  auto nonneg = [&](const char* name, double v) {
    if (!(v >= 0)) out.push_back(fmt::format("{}: {} is negative", name, v));
  };
  nonneg("delay_penalty", inst.delay_penalty);
  nonneg("budget", inst.budget);
  nonneg("uncertainty_budget_diu", inst.uncertainty_budget_diu);
  nonneg("uncertainty_budget_ddu", inst.uncertainty_budget_ddu);

  for (std::size_t i = 0; i < I; ++i) {
    if (inst.demand[i] < 0) out.push_back(fmt::format("demand[{}]: {} is negative", i, inst.demand[i]));
    if (!(inst.unmet_penalty[i] >= 0))
      out.push_back(fmt::format("unmet_penalty[{}]: {} is negative", i, inst.unmet_penalty[i]));
    const double a = inst.unmet_fraction_cap[i];
    if (!(a >= 0 && a <= 1))
      out.push_back(fmt::format("unmet_fraction_cap[{}]: {} outside range [0, 1]", i, a));
    if (!(inst.delay_cap[i] >= 0))
      out.push_back(fmt::format("delay_cap[{}]: {} is negative", i, inst.delay_cap[i]));
  }
  for (std::size_t j = 0; j < J; ++j)
    if (inst.capacity[j] < 0)
      out.push_back(fmt::format("capacity[{}]: {} is negative", j, inst.capacity[j]));

  for (int i = 0; i < inst.num_areas; ++i) {
    for (int j = 0; j < inst.num_nodes; ++j) {
      const auto l = inst.link(i, j);
      if (!(inst.workload_impact[l] >= 0))
        out.push_back(fmt::format("workload_impact[{}][{}]: {} is negative", i, j, inst.workload_impact[l]));
      if (!(inst.delay_min[l] >= 0))
        out.push_back(fmt::format("delay_min[{}][{}]: {} is negative", i, j, inst.delay_min[l]));
      if (!(inst.delay_dev[l] >= 0))
        out.push_back(fmt::format("delay_dev[{}][{}]: {} is negative", i, j, inst.delay_dev[l]));
      for (int r = 0; r < inst.num_levels; ++r) {
        const double h = inst.h(i, j, r);
        const double g = inst.gamma(i, j, r);
        if (!(h >= 0)) out.push_back(fmt::format("harden_cost[{}][{}][{}]: {} is negative", i, j, r, h));
        if (!(g >= 0 && g < 1))
          out.push_back(fmt::format("harden_impact[{}][{}][{}]: {} outside range [0, 1)", i, j, r, g));
        if (r > 0 && !(h > inst.h(i, j, r - 1)))
          out.push_back(fmt::format(
              "harden_cost[{}][{}][{}]: monotonicity violated ({} is not above level {} cost {})",
              i, j, r, h, r - 1, inst.h(i, j, r - 1)));
        if (r > 0 && !(g > inst.gamma(i, j, r - 1)))
          out.push_back(fmt::format(
              "harden_impact[{}][{}][{}]: monotonicity violated ({} is not above level {} impact {})",
              i, j, r, g, r - 1, inst.gamma(i, j, r - 1)));
      }
    }
  }
  return out;
}

namespace {
constexpr const char* kMagic = "edgeharden-instance";
constexpr int kVersion = 1;
}  // namespace

std::string to_text(const Instance& inst) {
  const std::size_t I = static_cast<std::size_t>(inst.num_areas);
  const std::size_t J = static_cast<std::size_t>(inst.num_nodes);
  const std::size_t R = static_cast<std::size_t>(inst.num_levels);
  textfile::Writer w(kMagic, kVersion);
  w.scalar("num_areas", static_cast<std::int64_t>(inst.num_areas));
  w.scalar("num_nodes", static_cast<std::int64_t>(inst.num_nodes));
  w.scalar("num_levels", static_cast<std::int64_t>(inst.num_levels));
  w.scalar("delay_penalty", inst.delay_penalty);
  w.scalar("budget", inst.budget);
  w.scalar("uncertainty_budget_diu", inst.uncertainty_budget_diu);
  w.scalar("uncertainty_budget_ddu", inst.uncertainty_budget_ddu);
  w.array("demand", {I}, inst.demand);
  w.array("capacity", {J}, inst.capacity);
  w.array("unmet_penalty", {I}, inst.unmet_penalty);
  w.array("unmet_fraction_cap", {I}, inst.unmet_fraction_cap);
  w.array("delay_cap", {I}, inst.delay_cap);
  w.array("harden_cost", {I, J, R}, inst.harden_cost);
  w.array("harden_impact", {I, J, R}, inst.harden_impact);
  w.array("workload_impact", {I, J}, inst.workload_impact);
  w.array("delay_min", {I, J}, inst.delay_min);
  w.array("delay_dev", {I, J}, inst.delay_dev);
  return w.str();
}

Instance instance_from_text(const std::string& text, std::vector<std::string>* warnings) {
  textfile::Reader rd(text, kMagic);
  if (rd.version() != kVersion)
    throw ParseError("unsupported version " + std::to_string(rd.version()), 1, "version");
  Instance inst;
  auto count = [&](const char* key) {
    const auto v = rd.integer(key);
    if (v < 1) throw ParseError("must be >= 1", 0, key);
    return static_cast<int>(v);
  };
  inst.num_areas = count("num_areas");
  inst.num_nodes = count("num_nodes");
  inst.num_levels = count("num_levels");
  const std::size_t I = static_cast<std::size_t>(inst.num_areas);
  const std::size_t J = static_cast<std::size_t>(inst.num_nodes);
  const std::size_t R = static_cast<std::size_t>(inst.num_levels);
  inst.delay_penalty = rd.scalar("delay_penalty");
  inst.budget = rd.scalar("budget");
  inst.uncertainty_budget_diu = rd.scalar("uncertainty_budget_diu");
  inst.uncertainty_budget_ddu = rd.scalar("uncertainty_budget_ddu");
  inst.demand = rd.int_array("demand", {I});
  inst.capacity = rd.int_array("capacity", {J});
  inst.unmet_penalty = rd.array("unmet_penalty", {I});
  inst.unmet_fraction_cap = rd.array("unmet_fraction_cap", {I});
  inst.delay_cap = rd.array("delay_cap", {I});
  inst.harden_cost = rd.array("harden_cost", {I, J, R});
  inst.harden_impact = rd.array("harden_impact", {I, J, R});
  inst.workload_impact = rd.array("workload_impact", {I, J});
  inst.delay_min = rd.array("delay_min", {I, J});
  inst.delay_dev = rd.array("delay_dev", {I, J});
  if (warnings)
    for (const auto& key : rd.unused_keys())
      warnings->push_back("unknown field '" + key + "' ignored");
  return inst;
}

void save(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << to_text(inst);
  if (!out) throw Error("write failed: " + path.string());
}

Instance load(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return instance_from_text(ss.str(), warnings);
}

Instance sub_instance(const Instance& inst, int areas, int nodes) {
  if (areas < 1 || areas > inst.num_areas || nodes < 1 || nodes > inst.num_nodes)
    throw InvalidConfig(fmt::format("sub-instance {}x{} not contained in {}x{}", areas, nodes,
                                    inst.num_areas, inst.num_nodes));
  Instance out = inst;
  out.num_areas = areas;
  out.num_nodes = nodes;
  out.demand.resize(static_cast<std::size_t>(areas));
  out.unmet_penalty.resize(static_cast<std::size_t>(areas));
  out.unmet_fraction_cap.resize(static_cast<std::size_t>(areas));
  out.delay_cap.resize(static_cast<std::size_t>(areas));
  out.capacity.resize(static_cast<std::size_t>(nodes));
  out.harden_cost.clear();
  out.harden_impact.clear();
  out.workload_impact.clear();
  out.delay_min.clear();
  out.delay_dev.clear();
  for (int i = 0; i < areas; ++i) {
    for (int j = 0; j < nodes; ++j) {
      out.workload_impact.push_back(inst.u(i, j));
      out.delay_min.push_back(inst.dmin(i, j));
      out.delay_dev.push_back(inst.ddev(i, j));
      for (int r = 0; r < inst.num_levels; ++r) {
        out.harden_cost.push_back(inst.h(i, j, r));
        out.harden_impact.push_back(inst.gamma(i, j, r));
      }
    }
  }
  return out;
}

}  // namespace edgeharden
