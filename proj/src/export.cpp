#include <cctype>
#include <cmath>
#include <set>
#include <string_view>

#include <fmt/format.h>

#include "edgeharden/errors.hpp"
#include "edgeharden/milp.hpp"

namespace edgeharden {

namespace {

std::string number(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.17g}", v);
}

bool plain_name(const std::string& s) {
  if (s.empty() || s.size() > kMaxExportName) return false;
  for (unsigned char c : s)
    if (c <= 32 || c >= 127) return false;
  return true;
}

bool lp_name(const std::string& s) {
  if (!plain_name(s)) return false;
  const unsigned char first = static_cast<unsigned char>(s.front());
  if (std::isdigit(first) || first == '.' || first == 'e' || first == 'E') return false;
  for (unsigned char c : s) {
    if (std::isalnum(c)) continue;
    if (std::string_view("!\"#$%&()/,.;?@_`'{}|~").find(static_cast<char>(c)) ==
        std::string_view::npos)
      return false;
  }
  return true;
}

/// Export names for columns and rows; mangles what the format cannot carry
/// and records the mapping.
struct NameTable {
  std::vector<std::string> cols;
  std::vector<std::string> rows;
  std::map<std::string, std::string> mangled;
};

NameTable make_names(const MilpModel& m, bool (*ok)(const std::string&)) {
  NameTable t;
  std::set<std::string> used;
  for (const auto& v : m.variables()) used.insert(v.name);
  for (const auto& r : m.constraints()) used.insert(r.name);
  auto fresh = [&](const char* prefix, std::size_t k) {
    std::string s = fmt::format("{}{}", prefix, k);
    while (used.count(s)) s += '_';
    used.insert(s);
    return s;
  };
  std::set<std::string> taken;
  for (std::size_t k = 0; k < m.variables().size(); ++k) {
    const auto& name = m.variables()[k].name;
    if (ok(name)) {
      t.cols.push_back(name);
    } else {
      t.cols.push_back(fresh("C_", k));
      t.mangled[t.cols.back()] = name;
    }
    taken.insert(t.cols.back());
  }
  for (std::size_t k = 0; k < m.constraints().size(); ++k) {
    const auto& name = m.constraints()[k].name;
    if (name.empty()) {
      t.rows.push_back(fresh("R_", k));
    } else if (!ok(name) || taken.count(name) || name == "OBJ") {
      t.rows.push_back(fresh("R_", k));
      t.mangled[t.rows.back()] = name;
    } else {
      t.rows.push_back(name);
    }
    taken.insert(t.rows.back());
  }
  return t;
}

// Fixed-format field start columns (1-based): 2, 5, 15, 25, 40, 50.
void fixed_line(std::string& out, std::initializer_list<std::string_view> fields) {
  static constexpr std::size_t starts[] = {1, 4, 14, 24, 39, 49};
  std::string line;
  std::size_t k = 0;
  for (auto f : fields) {
    if (k < 6 && line.size() < starts[k]) line.resize(starts[k], ' ');
    else if (!line.empty()) line += ' ';
    line += f;
    ++k;
  }
  out += line;
  out += '\n';
}

}  // namespace

ExportedModel write_mps(const MilpModel& m) {
  if (m.empty()) throw ModelError("cannot export an empty model");
  const NameTable names = make_names(m, plain_name);
  const auto n = m.num_vars();

  // Column-wise view of the rows.
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(n);
  for (std::size_t r = 0; r < m.constraints().size(); ++r)
    for (const auto& [v, c] : m.constraints()[r].expr.terms()) cols[v.index].emplace_back(r, c);
  std::vector<double> obj(n, 0.0);
  for (const auto& [v, c] : m.objective().terms()) obj[v.index] += c;

  std::string out;
  out += fmt::format("NAME          {}\n", plain_name(m.name()) ? m.name() : "model");
  out += "ROWS\n";
  fixed_line(out, {"N", "OBJ"});
  for (std::size_t r = 0; r < m.constraints().size(); ++r) {
    const char* s = "L";
    switch (m.constraints()[r].sense) {
      case Sense::le: s = "L"; break;
      case Sense::ge: s = "G"; break;
      case Sense::eq: s = "E"; break;
    }
    fixed_line(out, {s, names.rows[r]});
  }

  out += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const bool integral = m.variables()[k].kind != VarKind::continuous;
    if (integral != in_int) {
      fixed_line(out, {"", fmt::format("MARKER{}", marker++), "'MARKER'", "",
                       integral ? "'INTORG'" : "'INTEND'"});
      in_int = integral;
    }
    const auto& col = names.cols[k];
    bool any = false;
    if (obj[k] != 0.0) {
      fixed_line(out, {"", col, "OBJ", number(obj[k])});
      any = true;
    }
    for (const auto& [r, c] : cols[k]) {
      fixed_line(out, {"", col, names.rows[r], number(c)});
      any = true;
    }
    if (!any) fixed_line(out, {"", col, "OBJ", "0"});
  }
  if (in_int) fixed_line(out, {"", fmt::format("MARKER{}", marker++), "'MARKER'", "", "'INTEND'"});

  out += "RHS\n";
  if (m.objective().constant() != 0.0)
    fixed_line(out, {"", "RHS", "OBJ", number(-m.objective().constant())});
  for (std::size_t r = 0; r < m.constraints().size(); ++r)
    if (m.constraints()[r].rhs != 0.0)
      fixed_line(out, {"", "RHS", names.rows[r], number(m.constraints()[r].rhs)});

  out += "BOUNDS\n";
  for (std::size_t k = 0; k < n; ++k) {
    const auto& v = m.variables()[k];
    const auto& col = names.cols[k];
    const bool integral = v.kind != VarKind::continuous;
    if (v.lower == v.upper) {
      fixed_line(out, {"FX", "BND", col, number(v.lower)});
      continue;
    }
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      fixed_line(out, {"FR", "BND", col});
      continue;
    }
    if (std::isinf(v.lower))
      fixed_line(out, {"MI", "BND", col});
    else if (v.lower != 0.0 || integral || v.upper < 0.0)
      fixed_line(out, {"LO", "BND", col, number(v.lower)});
    if (std::isfinite(v.upper))
      fixed_line(out, {"UP", "BND", col, number(v.upper)});
    else if (integral)
      fixed_line(out, {"PL", "BND", col});
  }
  out += "ENDATA\n";
  return ExportedModel{std::move(out), names.mangled, names.cols, names.rows};
}

ExportedModel write_lp(const MilpModel& m) {
  if (m.empty()) throw ModelError("cannot export an empty model");
  const NameTable names = make_names(m, lp_name);

  auto expr_text = [&](const LinExpr& e, std::string& out) {
    std::size_t on_line = 0;
    for (const auto& [v, c] : e.terms()) {
      if (on_line == 6) {
        out += "\n   ";
        on_line = 0;
      }
      out += c < 0 ? " - " : " + ";
      out += number(std::abs(c));
      out += ' ';
      out += names.cols[v.index];
      ++on_line;
    }
    if (e.terms().empty()) out += " 0 " + names.cols[0];
  };

  std::string out;
  out += fmt::format("\\ Problem name: {}\n", m.name());
  if (m.objective().constant() != 0.0)
    out += fmt::format("\\ Objective constant: {}\n", number(m.objective().constant()));
  out += "Minimize\n obj:";
  expr_text(m.objective(), out);
  out += "\nSubject To\n";
  for (std::size_t r = 0; r < m.constraints().size(); ++r) {
    const auto& row = m.constraints()[r];
    out += ' ';
    out += names.rows[r];
    out += ':';
    expr_text(row.expr, out);
    switch (row.sense) {
      case Sense::le: out += " <= "; break;
      case Sense::ge: out += " >= "; break;
      case Sense::eq: out += " = "; break;
    }
    out += number(row.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (std::size_t k = 0; k < m.num_vars(); ++k) {
    const auto& v = m.variables()[k];
    const auto& col = names.cols[k];
    if (v.kind == VarKind::binary && v.lower == 0.0 && v.upper == 1.0) continue;
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out += fmt::format(" {} free\n", col);
    } else if (v.lower == v.upper) {
      out += fmt::format(" {} = {}\n", col, number(v.lower));
    } else {
      const std::string lo = std::isinf(v.lower) ? "-inf" : number(v.lower);
      const std::string hi = std::isinf(v.upper) ? "+inf" : number(v.upper);
      out += fmt::format(" {} <= {} <= {}\n", lo, col, hi);
    }
  }
  std::string generals, binaries;
  for (std::size_t k = 0; k < m.num_vars(); ++k) {
    const auto& v = m.variables()[k];
    if (v.kind == VarKind::integer) generals += " " + names.cols[k] + "\n";
    if (v.kind == VarKind::binary) binaries += " " + names.cols[k] + "\n";
  }
  if (!generals.empty()) out += "Generals\n" + generals;
  if (!binaries.empty()) out += "Binaries\n" + binaries;
  out += "End\n";
  return ExportedModel{std::move(out), names.mangled, names.cols, names.rows};
}

std::string sidecar_text(const ExportedModel& exported) {
  std::string out;
  for (const auto& [k, v] : exported.mangled) out += k + ' ' + v + '\n';
  return out;
}

}  // namespace edgeharden
