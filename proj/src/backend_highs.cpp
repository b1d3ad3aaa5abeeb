// In-process solver backend on the HiGHS library.

#include <cmath>

#include <Highs.h>

#include "edgeharden/solver.hpp"

namespace edgeharden {

namespace {

HighsLp to_highs(const MilpModel& model) {
  HighsLp lp;
  const auto n = static_cast<HighsInt>(model.num_vars());
  const auto m = static_cast<HighsInt>(model.num_rows());
  lp.num_col_ = n;
  lp.num_row_ = m;
  lp.sense_ = ObjSense::kMinimize;
  lp.offset_ = model.objective().constant();
  lp.col_cost_.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& [v, c] : model.objective().terms()) lp.col_cost_[v.index] += c;
  bool integral = false;
  lp.integrality_.assign(static_cast<std::size_t>(n), HighsVarType::kContinuous);
  for (std::size_t k = 0; k < model.num_vars(); ++k) {
    const auto& v = model.variables()[k];
    lp.col_lower_.push_back(std::isinf(v.lower) ? -kHighsInf : v.lower);
    lp.col_upper_.push_back(std::isinf(v.upper) ? kHighsInf : v.upper);
    if (v.kind != VarKind::continuous) {
      lp.integrality_[k] = HighsVarType::kInteger;
      integral = true;
    }
  }
  if (!integral) lp.integrality_.clear();

  std::vector<std::vector<std::pair<HighsInt, double>>> cols(model.num_vars());
  for (std::size_t r = 0; r < model.num_rows(); ++r) {
    const auto& row = model.constraints()[r];
    for (const auto& [v, c] : row.expr.terms()) cols[v.index].emplace_back(static_cast<HighsInt>(r), c);
    switch (row.sense) {
      case Sense::le:
        lp.row_lower_.push_back(-kHighsInf);
        lp.row_upper_.push_back(row.rhs);
        break;
      case Sense::ge:
        lp.row_lower_.push_back(row.rhs);
        lp.row_upper_.push_back(kHighsInf);
        break;
      case Sense::eq:
        lp.row_lower_.push_back(row.rhs);
        lp.row_upper_.push_back(row.rhs);
        break;
    }
  }
  lp.a_matrix_.format_ = MatrixFormat::kColwise;
  lp.a_matrix_.num_col_ = n;
  lp.a_matrix_.num_row_ = m;
  lp.a_matrix_.start_.assign(1, 0);
  for (const auto& col : cols) {
    for (const auto& [r, c] : col) {
      lp.a_matrix_.index_.push_back(r);
      lp.a_matrix_.value_.push_back(c);
    }
    lp.a_matrix_.start_.push_back(static_cast<HighsInt>(lp.a_matrix_.index_.size()));
  }
  return lp;
}

class HighsBackend final : public Backend {
 public:
  std::string name() const override { return "highs"; }
  bool available(std::string*) const override { return true; }

  SolverResult run(const MilpModel& model, const SolverConfig& config) const override {
    Highs highs;
    highs.setOptionValue("output_flag", false);
    highs.setOptionValue("mip_rel_gap", config.mip_gap);
    highs.setOptionValue("mip_abs_gap", config.mip_gap > 0.0 ? 1e-6 : 0.0);
    highs.setOptionValue("time_limit", config.time_limit);
    highs.setOptionValue("random_seed", static_cast<HighsInt>(config.seed % 2147483647u));
    highs.setOptionValue("mip_feasibility_tolerance", 1e-7);
    highs.setOptionValue("primal_feasibility_tolerance", 1e-8);

    SolverResult res;
    const HighsLp lp = to_highs(model);
    if (highs.passModel(lp) == HighsStatus::kError) {
      res.status = SolveStatus::error;
      res.message = "HiGHS rejected the model";
      return res;
    }
    if (!config.start.empty()) {
      std::vector<HighsInt> idx;
      std::vector<double> val;
      for (std::size_t k = 0; k < config.start.size(); ++k)
        if (!std::isnan(config.start[k])) {
          idx.push_back(static_cast<HighsInt>(k));
          val.push_back(config.start[k]);
        }
      // A rejected start is not an error; the search just begins cold.
      if (!idx.empty()) highs.setSolution(static_cast<HighsInt>(idx.size()), idx.data(), val.data());
    }
    if (highs.run() == HighsStatus::kError) {
      res.status = SolveStatus::error;
      res.message = "HiGHS run failed";
      return res;
    }
    const HighsInfo& info = highs.getInfo();
    const bool mip = !lp.integrality_.empty();
    const bool have_point = info.primal_solution_status == kSolutionStatusFeasible;
    switch (highs.getModelStatus()) {
      case HighsModelStatus::kOptimal: res.status = SolveStatus::optimal; break;
      case HighsModelStatus::kInfeasible: res.status = SolveStatus::infeasible; return res;
      case HighsModelStatus::kUnbounded: res.status = SolveStatus::unbounded; return res;
      case HighsModelStatus::kUnboundedOrInfeasible:
        res.status = SolveStatus::infeasible;
        res.message = "infeasible or unbounded";
        return res;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
        res.status = have_point ? SolveStatus::feasible : SolveStatus::timeout;
        res.message = "stopped early: " + highs.modelStatusToString(highs.getModelStatus());
        if (!have_point) return res;
        break;
      default:
        res.status = SolveStatus::error;
        res.message = "HiGHS status " + highs.modelStatusToString(highs.getModelStatus());
        return res;
    }
    if (!have_point) {
      res.status = SolveStatus::error;
      res.message = "HiGHS reported no primal solution";
      return res;
    }
    res.values = highs.getSolution().col_value;
    res.objective = info.objective_function_value;
    res.bound = mip ? info.mip_dual_bound : res.objective;
    return res;
  }
};

}  // namespace

std::shared_ptr<Backend> make_highs_backend() { return std::make_shared<HighsBackend>(); }

}  // namespace edgeharden
