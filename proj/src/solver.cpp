#include "edgeharden/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>

#include <fmt/format.h>

#include "edgeharden/errors.hpp"

namespace edgeharden {

std::shared_ptr<Backend> make_cbc_backend();
#ifdef EDGEHARDEN_HAVE_HIGHS
std::shared_ptr<Backend> make_highs_backend();
#endif

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::timeout: return "timeout";
    case SolveStatus::error: return "error";
  }
  return "?";
}

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<Backend>, std::less<>> backends;

  Registry() {
    add(make_cbc_backend());
#ifdef EDGEHARDEN_HAVE_HIGHS
    add(make_highs_backend());
#endif
  }
  void add(std::shared_ptr<Backend> b) { backends[b->name()] = std::move(b); }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_backend(std::shared_ptr<Backend> backend) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.add(std::move(backend));
}

std::shared_ptr<Backend> find_backend(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.backends.find(name);
  return it == r.backends.end() ? nullptr : it->second;
}

std::vector<std::string> registered_backends() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> out;
  for (const auto& [name, b] : r.backends) out.push_back(name);
  return out;
}

std::string default_backend() {
  if (const char* env = std::getenv("EDGEHARDEN_SOLVER"); env && *env) return env;
  for (const char* name : {"highs", "cbc"})
    if (find_backend(name)) return name;
  return "cbc";
}

SolverResult solve(const MilpModel& model, const SolverConfig& config) {
  if (model.empty()) throw ModelError("cannot solve an empty model");
  if (!(config.mip_gap >= 0.0)) throw InvalidConfig("mip gap must be >= 0");
  if (!(config.time_limit > 0.0)) throw InvalidConfig("time limit must be > 0");
  if (config.threads < 1) throw InvalidConfig("threads must be >= 1");
  if (!config.start.empty() && config.start.size() != model.num_vars())
    throw InvalidConfig(fmt::format("MIP start has {} values for {} variables", config.start.size(),
                                    model.num_vars()));
  const std::string name = config.backend.empty() ? default_backend() : config.backend;
  auto backend = find_backend(name);
  if (!backend) {
    std::string known;
    for (const auto& b : registered_backends()) known += (known.empty() ? "" : ", ") + b;
    throw EnvironmentError(fmt::format("unknown solver backend '{}' (registered: {})", name, known));
  }
  std::string reason;
  if (!backend->available(&reason))
    throw EnvironmentError(fmt::format("solver backend '{}' is not available: {}", name, reason));

  const auto start = std::chrono::steady_clock::now();
  SolverResult res = backend->run(model, config);
  res.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.backend = name;

  if (!res.has_solution()) {
    res.values.clear();
    return res;
  }
  if (res.values.size() != model.num_vars()) {
    res.status = SolveStatus::error;
    res.message = fmt::format("backend returned {} values for {} variables", res.values.size(),
                              model.num_vars());
    res.values.clear();
    return res;
  }
  const auto [viol, where] = model.scaled_violation(res.values);
  if (viol > kFeasibilityTol) {
    res.status = SolveStatus::error;
    res.message = fmt::format("returned point violates '{}' by {:.3g}", where, viol);
    res.values.clear();
    return res;
  }
  res.objective = model.objective().evaluate(res.values);
  const double scale = std::max(1.0, std::abs(res.objective));
  if (res.status == SolveStatus::optimal) {
    // Recomputation and solver tolerances may move the objective slightly
    // past the bound; anything beyond that means the gap claim is false.
    const double slack = config.mip_gap * scale + 1e-6 * scale;
    if (!std::isfinite(res.bound) || std::abs(res.objective - res.bound) > slack) {
      res.status = SolveStatus::feasible;
      res.message = fmt::format("gap claim not met: objective {} bound {}", res.objective, res.bound);
    }
  }
  return res;
}

std::vector<std::string> probe_backends(std::vector<std::string>* log) {
  MilpModel smoke("smoke");
  const VarRef x = smoke.add_var("x", VarKind::integer, 0, 10);
  smoke.add_constr(LinExpr(x), Sense::ge, 0.5, "c1");
  smoke.set_objective(LinExpr(x));
  std::vector<std::string> out;
  for (const auto& name : registered_backends()) {
    auto b = find_backend(name);
    std::string reason;
    if (!b->available(&reason)) {
      if (log) log->push_back(name + ": " + reason);
      continue;
    }
    SolverConfig cfg;
    cfg.backend = name;
    cfg.time_limit = 30;
    try {
      const auto res = solve(smoke, cfg);
      if (res.status == SolveStatus::optimal && std::abs(res.objective - 1.0) < 1e-9) {
        out.push_back(name);
      } else if (log) {
        log->push_back(fmt::format("{}: smoke model gave {} {}", name, status_name(res.status), res.objective));
      }
    } catch (const Error& e) {
      if (log) log->push_back(name + ": " + e.what());
    }
  }
  return out;
}

}  // namespace edgeharden
