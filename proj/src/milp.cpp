#include "edgeharden/milp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "edgeharden/errors.hpp"

namespace edgeharden {

LinExpr& LinExpr::add(const LinExpr& other, double scale) {
  for (const auto& [v, c] : other.terms_) terms_.emplace_back(v, c * scale);
  constant_ += other.constant_ * scale;
  return *this;
}

void LinExpr::normalize() {
  std::unordered_map<std::uint64_t, std::size_t> slot;
  slot.reserve(terms_.size());
  std::vector<std::pair<VarRef, double>> merged;
  merged.reserve(terms_.size());
  for (const auto& [v, c] : terms_) {
    const std::uint64_t key = (static_cast<std::uint64_t>(v.model) << 32) | v.index;
    auto [it, fresh] = slot.emplace(key, merged.size());
    if (fresh)
      merged.emplace_back(v, c);
    else
      merged[it->second].second += c;
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
  terms_ = std::move(merged);
}

double LinExpr::evaluate(std::span<const double> values) const {
  double s = constant_;
  for (const auto& [v, c] : terms_) s += c * values[v.index];
  return s;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a.add(b, 1.0); }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a.add(b, -1.0); }
LinExpr operator*(double s, LinExpr a) {
  LinExpr out;
  out.add(a, s);
  return out;
}

namespace {
std::atomic<std::uint32_t> next_model_id{1};
}

MilpModel::MilpModel(std::string name) : name_(std::move(name)), id_(next_model_id++) {}

VarRef MilpModel::add_var(Variable var) {
  if (var.name.empty()) throw ModelError("variable name must not be empty");
  if (var.kind == VarKind::binary) {
    var.lower = std::max(var.lower, 0.0);
    var.upper = std::min(var.upper, 1.0);
  }
  if (!(var.lower <= var.upper))
    throw ModelError("variable '" + var.name + "' has lower bound above upper bound");
  const auto index = static_cast<std::uint32_t>(vars_.size());
  auto [it, fresh] = by_name_.emplace(var.name, index);
  if (!fresh) throw ModelError("duplicate variable name '" + var.name + "'");
  vars_.push_back(std::move(var));
  return VarRef{index, id_};
}

void MilpModel::check(const LinExpr& e) const {
  for (const auto& [v, c] : e.terms()) {
    if (!owns(v))
      throw ModelError("expression references a variable of another model (index " +
                       std::to_string(v.index) + ")");
    if (!std::isfinite(c)) throw ModelError("non-finite coefficient on " + vars_[v.index].name);
  }
}

std::size_t MilpModel::add_constr(LinExpr expr, Sense sense, double rhs, std::string name) {
  check(expr);
  expr.normalize();
  const double shift = expr.constant();
  expr.add_constant(-shift);
  rows_.push_back(Constraint{std::move(expr), sense, rhs - shift, std::move(name)});
  return rows_.size() - 1;
}

void MilpModel::set_objective(LinExpr expr) {
  check(expr);
  expr.normalize();
  objective_ = std::move(expr);
}

void MilpModel::set_bounds(VarRef v, double lower, double upper) {
  if (!owns(v)) throw ModelError("set_bounds on a foreign variable");
  if (!(lower <= upper)) throw ModelError("set_bounds: lower above upper");
  vars_[v.index].lower = lower;
  vars_[v.index].upper = upper;
}

const Variable& MilpModel::var(VarRef v) const {
  if (!owns(v)) throw ModelError("foreign variable reference");
  return vars_[v.index];
}

VarRef MilpModel::ref(std::size_t index) const {
  if (index >= vars_.size()) throw ModelError("variable index out of range");
  return VarRef{static_cast<std::uint32_t>(index), id_};
}

ModelStats MilpModel::stats() const {
  ModelStats s;
  s.rows = rows_.size();
  s.cols = vars_.size();
  for (const auto& v : vars_) {
    switch (v.kind) {
      case VarKind::binary: ++s.binaries; break;
      case VarKind::integer: ++s.integers; break;
      case VarKind::continuous: ++s.continuous; break;
    }
  }
  for (const auto& r : rows_) s.nonzeros += r.expr.terms().size();
  return s;
}

std::pair<double, std::string> MilpModel::max_violation(std::span<const double> values) const {
  if (values.size() != vars_.size()) return {kInf, "value vector size mismatch"};
  double worst = 0.0;
  std::string where;
  auto note = [&](double v, const std::string& name) {
    if (v > worst) {
      worst = v;
      where = name;
    }
  };
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    const auto& v = vars_[k];
    const double x = values[k];
    if (!std::isfinite(x)) {
      note(kInf, v.name);
      continue;
    }
    note(v.lower - x, v.name);
    note(x - v.upper, v.name);
    if (v.kind != VarKind::continuous) note(std::abs(x - std::round(x)), v.name);
  }
  for (const auto& r : rows_) {
    const double lhs = r.expr.evaluate(values);
    switch (r.sense) {
      case Sense::le: note(lhs - r.rhs, r.name); break;
      case Sense::ge: note(r.rhs - lhs, r.name); break;
      case Sense::eq: note(std::abs(lhs - r.rhs), r.name); break;
    }
  }
  return {worst, where};
}

std::pair<double, std::string> MilpModel::scaled_violation(std::span<const double> values) const {
  if (values.size() != vars_.size()) return {kInf, "value vector size mismatch"};
  double worst = 0.0;
  std::string where;
  auto note = [&](double v, const std::string& name) {
    if (v > worst) {
      worst = v;
      where = name;
    }
  };
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    const auto& v = vars_[k];
    const double x = values[k];
    if (!std::isfinite(x)) {
      note(kInf, v.name);
      continue;
    }
    if (std::isfinite(v.lower)) note((v.lower - x) / std::max(1.0, std::abs(v.lower)), v.name);
    if (std::isfinite(v.upper)) note((x - v.upper) / std::max(1.0, std::abs(v.upper)), v.name);
    if (v.kind != VarKind::continuous) note(std::abs(x - std::round(x)), v.name);
  }
  for (const auto& r : rows_) {
    double scale = std::max(1.0, std::abs(r.rhs));
    for (const auto& [v, c] : r.expr.terms()) scale = std::max(scale, std::abs(c * values[v.index]));
    const double lhs = r.expr.evaluate(values);
    double viol = 0.0;
    switch (r.sense) {
      case Sense::le: viol = lhs - r.rhs; break;
      case Sense::ge: viol = r.rhs - lhs; break;
      case Sense::eq: viol = std::abs(lhs - r.rhs); break;
    }
    note(viol / scale, r.name);
  }
  return {worst, where};
}

}  // namespace edgeharden
