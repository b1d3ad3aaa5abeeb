#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "edgeharden/milp.hpp"

namespace edgeharden {

enum class SolveStatus { optimal, feasible, infeasible, unbounded, timeout, error };

std::string_view status_name(SolveStatus s);

struct SolverConfig {
  std::string backend;  // empty: default_backend()
  double mip_gap = 1e-4;
  double time_limit = 600.0;  // seconds
  int threads = 1;
  std::uint64_t seed = 0;
  /// Optional MIP start by variable index; NaN leaves a variable to the
  /// solver. Empty: no start.
  std::vector<double> start;
};

struct SolverResult {
  SolveStatus status = SolveStatus::error;
  double objective = 0.0;
  double bound = 0.0;
  std::vector<double> values;  // by variable index; empty without a solution
  double runtime = 0.0;
  std::string backend;
  std::string message;

  bool has_solution() const noexcept {
    return status == SolveStatus::optimal || status == SolveStatus::feasible;
  }
};

/// Row and bound violations above this are treated as solver failures.
inline constexpr double kFeasibilityTol = 1e-6;

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  /// Fills `reason` when the backend cannot run here.
  virtual bool available(std::string* reason) const = 0;
  /// Raw solve; checks and objective recomputation happen in solve().
  virtual SolverResult run(const MilpModel& model, const SolverConfig& config) const = 0;
};

/// Adds or replaces a backend under its name.
void register_backend(std::shared_ptr<Backend> backend);
std::shared_ptr<Backend> find_backend(std::string_view name);
std::vector<std::string> registered_backends();

/// $EDGEHARDEN_SOLVER if set, otherwise the first of highs, cbc that is
/// registered.
std::string default_backend();

/// Solves `model` (minimize). Throws EnvironmentError when the backend is
/// unknown or unavailable, InvalidConfig for bad settings, ModelError for an
/// empty model. Returned values are re-checked against every row and bound;
/// violations above kFeasibilityTol turn the status into error. The
/// objective is recomputed from the values.
SolverResult solve(const MilpModel& model, const SolverConfig& config = {});

/// Backends that solve a one-variable smoke model to optimality. Reasons for
/// exclusions are appended to `log`.
std::vector<std::string> probe_backends(std::vector<std::string>* log = nullptr);

/// Path of the cbc executable: $EDGEHARDEN_CBC, then PATH, then the path
/// found at build time. Empty when none exists.
std::string cbc_path();

}  // namespace edgeharden
