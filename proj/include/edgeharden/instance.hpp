#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace edgeharden {

/// Problem data for one hardening instance. Arrays are row-major:
/// per-link arrays are indexed [area][node], per-level arrays
/// [area][node][level]. Levels are 0-based in code and 1-based in file
/// and model names.
struct Instance {
  int num_areas = 0;
  int num_nodes = 0;
  int num_levels = 0;

  std::vector<std::int64_t> demand;    // I
  std::vector<std::int64_t> capacity;  // J
  std::vector<double> unmet_penalty;   // I
  double delay_penalty = 0.0;
  std::vector<double> unmet_fraction_cap;  // I
  std::vector<double> delay_cap;           // I
  double budget = 0.0;
  std::vector<double> harden_cost;      // I*J*R
  std::vector<double> harden_impact;    // I*J*R
  std::vector<double> workload_impact;  // I*J
  std::vector<double> delay_min;        // I*J
  std::vector<double> delay_dev;        // I*J
  double uncertainty_budget_diu = 0.0;
  double uncertainty_budget_ddu = 0.0;

  std::size_t num_links() const noexcept {
    return static_cast<std::size_t>(num_areas) * static_cast<std::size_t>(num_nodes);
  }
  std::size_t link(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(num_nodes) +
           static_cast<std::size_t>(j);
  }
  std::size_t level(int i, int j, int r) const noexcept {
    return link(i, j) * static_cast<std::size_t>(num_levels) + static_cast<std::size_t>(r);
  }

  double h(int i, int j, int r) const { return harden_cost[level(i, j, r)]; }
  double gamma(int i, int j, int r) const { return harden_impact[level(i, j, r)]; }
  double u(int i, int j) const { return workload_impact[link(i, j)]; }
  double dmin(int i, int j) const { return delay_min[link(i, j)]; }
  double ddev(int i, int j) const { return delay_dev[link(i, j)]; }

  /// Upper bound on x[i][j]: min(C_j, lambda_i).
  std::int64_t alloc_bound(int i, int j) const;
  /// floor(alpha_i * lambda_i), the largest admissible unmet demand.
  std::int64_t max_unmet(int i) const;

  bool operator==(const Instance&) const = default;
};

struct GenConfig {
  std::uint64_t seed = 1;
  int num_areas = 10;
  int num_nodes = 10;
  int num_levels = 3;
  std::pair<std::int64_t, std::int64_t> demand_range{40, 60};
  std::pair<double, double> penalty_range{40.0, 50.0};
  std::pair<double, double> base_harden_cost_range{1.0, 1.05};
  double delta_h = 0.2;
  double gamma_level1 = 0.1;
  double delta_gamma = 0.4;
  double u_uniform = 0.1;
  double psi = 1.0;
  std::vector<std::int64_t> capacity_pool{40, 60, 80, 100};
  std::pair<double, double> delay_min_range{1.5, 7.5};
  std::pair<double, double> delay_dev_range{3.0, 12.0};
  double delay_penalty = 0.1;
  double unmet_fraction_cap = 0.05;
  double delay_cap = 15.0;
  double budget = 100.0;
  double uncertainty_budget_diu = 15.0;
  double uncertainty_budget_ddu = 15.0;
};

/// Problems with a configuration; empty when it is usable.
std::vector<std::string> check_config(const GenConfig& config);

/// Deterministic in `config`. Throws InvalidConfig when check_config fails.
Instance generate(const GenConfig& config);

/// One entry per violated invariant, naming the field and index.
std::vector<std::string> validate(const Instance& inst);

/// Self-describing text format, see README for the layout.
std::string to_text(const Instance& inst);
/// Throws ParseError. Unknown keys are skipped and reported in `warnings`.
Instance instance_from_text(const std::string& text, std::vector<std::string>* warnings = nullptr);

void save(const Instance& inst, const std::filesystem::path& path);
Instance load(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// Keeps the first `areas` areas and the first `nodes` nodes.
Instance sub_instance(const Instance& inst, int areas, int nodes);

}  // namespace edgeharden
