#include "edgeharden/linearize.hpp"

#include <bit>

#include <fmt/format.h>

#include "edgeharden/errors.hpp"

namespace edgeharden {

int expansion_bits(std::int64_t bound) {
  if (bound < 1) throw ModelError(fmt::format("expansion bound must be >= 1, got {}", bound));
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(bound)));
}

BinaryExpansion binary_expand(MilpModel& model, VarRef x, std::int64_t bound,
                              const std::string& prefix) {
  const int q = expansion_bits(bound);
  const Variable& var = model.var(x);
  if (var.kind == VarKind::continuous)
    throw ModelError("binary_expand: '" + var.name + "' is not integer");
  if (var.lower < 0.0 || var.upper > static_cast<double>(bound))
    throw ModelError(fmt::format("binary_expand: bounds of '{}' leave [0, {}]", var.name, bound));

  BinaryExpansion e;
  e.source = x;
  e.bound = bound;
  e.model = x.model;
  LinExpr link(x, -1.0);
  for (int k = 0; k < q; ++k) {
    e.bits.push_back(model.add_var(fmt::format("{}_{}", prefix, k + 1), VarKind::binary, 0, 1));
    link.add(e.bits.back(), static_cast<double>(std::int64_t{1} << k));
  }
  e.link_row = model.add_constr(std::move(link), Sense::eq, 0.0, prefix + "_link");
  return e;
}

VarRef mccormick_bin_cont(MilpModel& model, VarRef t, VarRef xi, double big_m,
                          const std::string& name) {
  if (!(big_m > 0.0)) throw ModelError(fmt::format("McCormick M must be positive, got {}", big_m));
  const VarRef p = model.add_var(name, VarKind::continuous, 0.0, big_m);
  model.add_constr(LinExpr(p) - LinExpr(t, big_m), Sense::le, 0.0, name + "_ub_t");
  model.add_constr(LinExpr(p) - LinExpr(xi), Sense::le, 0.0, name + "_ub_xi");
  model.add_constr(LinExpr(p) - LinExpr(xi) - LinExpr(t, big_m), Sense::ge, -big_m, name + "_lb");
  return p;
}

VarRef product_bin_int(MilpModel& model, VarRef y, VarRef x, double bound,
                       const std::string& name) {
  if (!(bound > 0.0)) throw ModelError(fmt::format("product bound must be positive, got {}", bound));
  const VarRef p = model.add_var(name, VarKind::continuous, 0.0, bound);
  model.add_constr(LinExpr(p) - LinExpr(y, bound), Sense::le, 0.0, name + "_ub_y");
  model.add_constr(LinExpr(p) - LinExpr(x), Sense::le, 0.0, name + "_ub_x");
  model.add_constr(LinExpr(p) - LinExpr(x) - LinExpr(y, bound), Sense::ge, -bound, name + "_lb");
  return p;
}

LinExpr linearize_square(MilpModel& model, VarRef x, const BinaryExpansion& expansion,
                         std::int64_t bound, const std::string& prefix) {
  if (expansion.source != x || expansion.model != x.model || !model.owns(x))
    throw ModelError("linearize_square: expansion was built for another variable");
  if (bound != expansion.bound) throw ModelError("linearize_square: bound differs from expansion");
  LinExpr sq;
  for (int k = 0; k < expansion.q(); ++k) {
    const VarRef p = product_bin_int(model, expansion.bits[static_cast<std::size_t>(k)], x,
                                     static_cast<double>(bound), fmt::format("{}_{}", prefix, k + 1));
    sq.add(p, static_cast<double>(std::int64_t{1} << k));
  }
  return sq;
}

namespace {

void check_spec(const MilpModel& model, const DduConstraintSpec& s) {
  const std::size_t m = s.a.size();
  if (m == 0) throw ModelError("dualize: spec has no rows");
  const std::size_t n = s.u.size();
  if (s.v.size() != m || s.psi.size() != m)
    throw ModelError("dualize: v and psi must have one entry per row of A");
  for (std::size_t i = 0; i < m; ++i) {
    if (s.a[i].size() != n) throw ModelError(fmt::format("dualize: row {} of A has wrong width", i));
    if (s.psi[i].size() != s.z.size())
      throw ModelError(fmt::format("dualize: row {} of psi has wrong width", i));
  }
  for (VarRef z : s.z)
    if (model.var(z).kind != VarKind::binary) throw ModelError("dualize: z entries must be binary");
  if (!(s.big_m > 0.0)) throw ModelError("dualize: M must be positive");
}

// pi >= 0 and pi'A = u'.
Dualization dual_core(MilpModel& model, const DduConstraintSpec& s) {
  Dualization d;
  for (std::size_t i = 0; i < s.a.size(); ++i)
    d.pi.push_back(
        model.add_var(fmt::format("{}_pi_{}", s.prefix, i + 1), VarKind::continuous, 0.0, s.big_m));
  for (std::size_t c = 0; c < s.u.size(); ++c) {
    LinExpr e;
    for (std::size_t i = 0; i < s.a.size(); ++i)
      if (s.a[i][c] != 0.0) e.add(d.pi[i], s.a[i][c]);
    d.rows.push_back(model.add_constr(std::move(e), Sense::eq, s.u[c],
                                      fmt::format("{}_dual_{}", s.prefix, c + 1)));
  }
  return d;
}

}  // namespace

Dualization dualize_bigm(MilpModel& model, const DduConstraintSpec& s) {
  check_spec(model, s);
  Dualization d = dual_core(model, s);
  LinExpr bound_row;
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    bound_row.add(d.pi[i], s.v[i]);
    for (std::size_t j = 0; j < s.z.size(); ++j) {
      const std::size_t before = model.num_rows();
      const VarRef y = mccormick_bin_cont(model, s.z[j], d.pi[i], s.big_m,
                                          fmt::format("{}_y_{}_{}", s.prefix, i + 1, j + 1));
      for (std::size_t r = before; r < model.num_rows(); ++r) d.rows.push_back(r);
      d.aux.push_back(y);
      bound_row.add(y, s.psi[i][j]);
    }
  }
  d.rows.push_back(model.add_constr(std::move(bound_row), Sense::le, s.b, s.prefix + "_bound"));
  return d;
}

Dualization dualize_enhanced(MilpModel& model, const DduConstraintSpec& s) {
  check_spec(model, s);
  Dualization d = dual_core(model, s);
  LinExpr bound_row;
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    double shift = 0.0;
    for (std::size_t j = 0; j < s.z.size(); ++j) {
      const double psi = s.psi[i][j];
      if (psi >= 0.0) {
        // y >= pi - M (1 - z)
        const VarRef y = model.add_var(fmt::format("{}_y_{}_{}", s.prefix, i + 1, j + 1),
                                       VarKind::continuous, 0.0, s.big_m);
        d.rows.push_back(model.add_constr(LinExpr(y) - LinExpr(d.pi[i]) - LinExpr(s.z[j], s.big_m),
                                          Sense::ge, -s.big_m,
                                          fmt::format("{}_y_{}_{}_lb", s.prefix, i + 1, j + 1)));
        d.aux.push_back(y);
        bound_row.add(y, psi);
      } else {
        // w >= pi - M z stands for pi (1 - z); psi pi z = psi pi - psi w.
        const VarRef w = model.add_var(fmt::format("{}_w_{}_{}", s.prefix, i + 1, j + 1),
                                       VarKind::continuous, 0.0, s.big_m);
        d.rows.push_back(model.add_constr(LinExpr(w) - LinExpr(d.pi[i]) + LinExpr(s.z[j], s.big_m),
                                          Sense::ge, 0.0,
                                          fmt::format("{}_w_{}_{}_lb", s.prefix, i + 1, j + 1)));
        d.aux.push_back(w);
        bound_row.add(w, -psi);
        shift += psi;
      }
    }
    bound_row.add(d.pi[i], s.v[i] + shift);
  }
  d.rows.push_back(model.add_constr(std::move(bound_row), Sense::le, s.b, s.prefix + "_bound"));
  return d;
}

}  // namespace edgeharden
