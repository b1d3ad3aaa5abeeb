#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace edgeharden {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Handle to a variable of the model that issued it.
struct VarRef {
  std::uint32_t index = 0;
  std::uint32_t model = 0;

  friend bool operator==(VarRef, VarRef) = default;
  friend auto operator<=>(VarRef a, VarRef b) { return a.index <=> b.index; }
};

enum class VarKind { continuous, integer, binary };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInf;
};

/// Sparse affine expression. Call normalize() (or let the model do it) to
/// merge duplicate references and drop zero coefficients.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(VarRef v, double coef = 1.0) { terms_.emplace_back(v, coef); }  // NOLINT

  LinExpr& add(VarRef v, double coef) {
    terms_.emplace_back(v, coef);
    return *this;
  }
  LinExpr& add(const LinExpr& other, double scale = 1.0);
  LinExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  LinExpr& operator+=(const LinExpr& o) { return add(o, 1.0); }
  LinExpr& operator-=(const LinExpr& o) { return add(o, -1.0); }

  /// Merges duplicates (first-occurrence order) and drops zeros.
  void normalize();

  const std::vector<std::pair<VarRef, double>>& terms() const noexcept { return terms_; }
  double constant() const noexcept { return constant_; }

  double evaluate(std::span<const double> values) const;

 private:
  std::vector<std::pair<VarRef, double>> terms_;
  double constant_ = 0.0;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(double s, LinExpr a);

enum class Sense { le, eq, ge };

struct Constraint {
  LinExpr expr;  // normalized, constant folded into rhs
  Sense sense = Sense::le;
  double rhs = 0.0;
  std::string name;
};

struct ModelStats {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t binaries = 0;
  std::size_t integers = 0;
  std::size_t continuous = 0;
  std::size_t nonzeros = 0;
};

/// Solver-neutral MILP: minimize objective subject to linear rows.
class MilpModel {
 public:
  explicit MilpModel(std::string name = "model");

  const std::string& name() const noexcept { return name_; }

  /// Throws ModelError on a duplicate name or inconsistent bounds. Binary
  /// variables are clamped to [0, 1].
  VarRef add_var(Variable var);
  VarRef add_var(std::string name, VarKind kind, double lower, double upper) {
    return add_var(Variable{std::move(name), kind, lower, upper});
  }

  /// Appends `expr sense rhs`. The expression constant moves to the rhs.
  /// Returns the row index. Throws ModelError on a foreign reference.
  std::size_t add_constr(LinExpr expr, Sense sense, double rhs, std::string name);

  void set_objective(LinExpr expr);

  /// Tightens or relaxes bounds of an existing variable.
  void set_bounds(VarRef v, double lower, double upper);

  const std::vector<Variable>& variables() const noexcept { return vars_; }
  const std::vector<Constraint>& constraints() const noexcept { return rows_; }
  const LinExpr& objective() const noexcept { return objective_; }
  const Variable& var(VarRef v) const;
  VarRef ref(std::size_t index) const;
  bool owns(VarRef v) const noexcept { return v.model == id_ && v.index < vars_.size(); }
  std::size_t num_vars() const noexcept { return vars_.size(); }
  std::size_t num_rows() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return vars_.empty(); }

  ModelStats stats() const;

  /// Largest absolute row violation of `values` (bounds and integrality
  /// included), together with the offending row or variable name.
  std::pair<double, std::string> max_violation(std::span<const double> values) const;

  /// As max_violation, but each row violation is divided by
  /// max(1, |rhs|, largest |a_k x_k|) and each bound violation by
  /// max(1, |bound|). Integrality stays absolute.
  std::pair<double, std::string> scaled_violation(std::span<const double> values) const;

 private:
  void check(const LinExpr& e) const;

  std::string name_;
  std::uint32_t id_;
  std::vector<Variable> vars_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
  std::vector<Constraint> rows_;
  LinExpr objective_;
};

/// Export result: file text plus the mangled-name sidecar (mangled ->
/// original). Names are kept verbatim when they are at most
/// kMaxExportName characters of printable non-space ASCII.
struct ExportedModel {
  std::string text;
  std::map<std::string, std::string> mangled;
  std::vector<std::string> columns;  // names as written, by variable index
  std::vector<std::string> rows;     // names as written, by row index
};

inline constexpr std::size_t kMaxExportName = 255;

/// MPS with fixed-format section layout and column positions; values are
/// printed with 17 significant digits. Throws ModelError on an empty model.
ExportedModel write_mps(const MilpModel& model);
/// CPLEX LP text format. Throws ModelError on an empty model.
ExportedModel write_lp(const MilpModel& model);

/// Sidecar map text: one "mangled original" pair per line.
std::string sidecar_text(const ExportedModel& exported);

}  // namespace edgeharden
