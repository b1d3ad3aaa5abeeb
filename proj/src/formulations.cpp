#include "edgeharden/formulations.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "edgeharden/errors.hpp"
#include "edgeharden/linearize.hpp"
#include "edgeharden/rng.hpp"
#include "edgeharden/textfile.hpp"

namespace edgeharden {

std::string_view formulation_name(Formulation f) {
  switch (f) {
    case Formulation::det: return "det";
    case Formulation::nh: return "nh";
    case Formulation::ro_nh: return "ro-nh";
    case Formulation::rddu: return "rddu";
    case Formulation::erddu: return "erddu";
    case Formulation::sddu: return "sddu";
    case Formulation::actual: return "actual";
  }
  return "?";
}

Formulation parse_formulation(std::string_view name) {
  for (auto f : {Formulation::det, Formulation::nh, Formulation::ro_nh, Formulation::rddu,
                 Formulation::erddu, Formulation::sddu})
    if (formulation_name(f) == name) return f;
  throw InvalidConfig(fmt::format("unknown formulation '{}'", name));
}

SdduScenarioSet make_sddu_scenarios(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidConfig("stochastic model needs at least one scenario");
  RandomStream rng(seed, streams::sddu_draws);
  SdduScenarioSet s;
  for (int k = 0; k < n; ++k) {
    s.draws.push_back(rng.uniform01());
    s.probs.push_back(1.0 / n);
  }
  return s;
}

namespace {

double lam(const Instance& inst, int i) { return static_cast<double>(inst.demand[static_cast<std::size_t>(i)]); }

// x and w for one allocation block, with capacity, demand and unmet-cap rows.
struct Allocation {
  std::vector<VarRef> x;
  std::vector<VarRef> w;
};

Allocation add_allocation(MilpModel& m, const Instance& inst, const std::string& sfx) {
  Allocation a;
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j)
      a.x.push_back(m.add_var(fmt::format("x_{}_{}{}", i, j, sfx), VarKind::integer, 0,
                              static_cast<double>(inst.alloc_bound(i, j))));
  for (int i = 0; i < inst.num_areas; ++i)
    a.w.push_back(m.add_var(fmt::format("w_{}{}", i, sfx), VarKind::integer, 0,
                            static_cast<double>(inst.max_unmet(i))));
  for (int j = 0; j < inst.num_nodes; ++j) {
    LinExpr e;
    for (int i = 0; i < inst.num_areas; ++i) e.add(a.x[inst.link(i, j)], 1.0);
    m.add_constr(std::move(e), Sense::le, static_cast<double>(inst.capacity[static_cast<std::size_t>(j)]),
                 fmt::format("cap_{}{}", j, sfx));
  }
  for (int i = 0; i < inst.num_areas; ++i) {
    LinExpr e(a.w[static_cast<std::size_t>(i)]);
    for (int j = 0; j < inst.num_nodes; ++j) e.add(a.x[inst.link(i, j)], 1.0);
    m.add_constr(std::move(e), Sense::eq, lam(inst, i), fmt::format("demand_{}{}", i, sfx));
    if (inst.demand[static_cast<std::size_t>(i)] > 0)
      m.add_constr(LinExpr(a.w[static_cast<std::size_t>(i)]), Sense::le,
                   inst.unmet_fraction_cap[static_cast<std::size_t>(i)] * lam(inst, i),
                   fmt::format("qos_{}{}", i, sfx));
  }
  return a;
}

// Hardening binaries with the budget and one-level-per-link rows. Returns
// the payment expression.
LinExpr add_hardening(MilpModel& m, const Instance& inst, std::vector<VarRef>& t) {
  LinExpr pay;
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j)
      for (int r = 0; r < inst.num_levels; ++r) {
        t.push_back(m.add_var(fmt::format("t_{}_{}_{}", i, j, r + 1), VarKind::binary, 0, 1));
        pay.add(t.back(), inst.h(i, j, r));
      }
  m.add_constr(pay, Sense::le, inst.budget, "budget");
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j) {
      LinExpr e;
      for (int r = 0; r < inst.num_levels; ++r) e.add(t[inst.level(i, j, r)], 1.0);
      m.add_constr(std::move(e), Sense::le, 1.0, fmt::format("level_{}_{}", i, j));
    }
  return pay;
}

LinExpr unmet_cost(const Instance& inst, const std::vector<VarRef>& w) {
  LinExpr e;
  for (int i = 0; i < inst.num_areas; ++i)
    e.add(w[static_cast<std::size_t>(i)], inst.unmet_penalty[static_cast<std::size_t>(i)]);
  return e;
}

// Squares of x[i][j] via binary expansion, only for links whose delay grows
// with workload. Empty expression elsewhere.
std::vector<LinExpr> add_squares(MilpModel& m, const Instance& inst, const std::vector<VarRef>& x,
                                 const std::string& sfx, const BuildOptions& opt) {
  std::vector<LinExpr> sq(inst.num_links());
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j) {
      const auto l = inst.link(i, j);
      const auto bound = inst.alloc_bound(i, j);
      if (inst.u(i, j) * inst.ddev(i, j) == 0.0 || bound < 1) continue;
      const auto e = binary_expand(m, x[l], bound, fmt::format("y_{}_{}{}", i, j, sfx));
      sq[l] = linearize_square(m, x[l], e, bound, fmt::format("Y_{}_{}{}", i, j, sfx));
      if (!opt.valid_cuts) continue;
      // The square gets its own column so the tangents of x^2 at integer
      // points stay two-term rows.
      const VarRef s = m.add_var(fmt::format("S_{}_{}{}", i, j, sfx), VarKind::continuous, 0.0,
                                 static_cast<double>(bound * bound));
      LinExpr def = sq[l];
      def.add(s, -1.0);
      m.add_constr(std::move(def), Sense::eq, 0.0, fmt::format("sq_{}_{}{}", i, j, sfx));
      sq[l] = LinExpr(s);
      for (std::int64_t k = 1; k < bound; ++k) {
        LinExpr cut(s);
        cut.add(x[l], -static_cast<double>(2 * k + 1));
        m.add_constr(std::move(cut), Sense::ge, -static_cast<double>(k * (k + 1)),
                     fmt::format("sqcut_{}_{}_{}{}", i, j, k, sfx));
      }
    }
  return sq;
}

void nominal_delay_rows(MilpModel& m, const Instance& inst, const std::vector<VarRef>& x,
                        bool with_dev) {
  for (int i = 0; i < inst.num_areas; ++i) {
    if (inst.demand[static_cast<std::size_t>(i)] == 0) continue;
    LinExpr e;
    for (int j = 0; j < inst.num_nodes; ++j) {
      const double d = inst.dmin(i, j) + (with_dev ? inst.ddev(i, j) : 0.0);
      e.add(x[inst.link(i, j)], d / lam(inst, i));
    }
    m.add_constr(std::move(e), Sense::le, inst.delay_cap[static_cast<std::size_t>(i)],
                 fmt::format("delay_{}", i));
  }
}

BuiltModel build_nominal(const Instance& inst, bool hardening, const char* name) {
  BuiltModel b;
  b.kind = hardening ? Formulation::det : Formulation::nh;
  b.model = MilpModel(name);
  LinExpr obj;
  if (hardening) obj = add_hardening(b.model, inst, b.t);
  auto a = add_allocation(b.model, inst, "");
  b.x = a.x;
  b.w = a.w;
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j)
      obj.add(b.x[inst.link(i, j)], inst.delay_penalty * inst.dmin(i, j));
  obj += unmet_cost(inst, b.w);
  nominal_delay_rows(b.model, inst, b.x, false);
  b.model.set_objective(std::move(obj));
  return b;
}

// Dual of  max sum_k c_k x_k g_k  s.t.  sum g <= budget, 0 <= g_k <= ub_k,
// over the links in `links`. With hardening, ub_k = 1 - sum_r gamma t; the
// bilinear t * xi terms are linearized per `enhanced`. Returns the
// expression bounding the inner maximum from above.
struct DualBlock {
  const Instance& inst;
  MilpModel& m;
  const std::vector<VarRef>& t;
  const std::vector<VarRef>& x;
  bool enhanced;
  bool cuts;
};

LinExpr robust_term(DualBlock& d, const std::vector<std::pair<int, int>>& links,
                    const std::vector<double>& coef, double budget, const std::string& tag) {
  const Instance& inst = d.inst;
  LinExpr out;
  const VarRef beta = d.m.add_var("beta_" + tag, VarKind::continuous, 0, kInf);
  out.add(beta, budget);
  for (std::size_t k = 0; k < links.size(); ++k) {
    const auto [i, j] = links[k];
    const auto l = inst.link(i, j);
    // Optimal xi is max(0, c x - beta) <= c L, so c L bounds it.
    const double big_m = coef[k] * static_cast<double>(inst.alloc_bound(i, j));
    const VarRef xi = d.m.add_var(fmt::format("xi_{}_{}_{}", tag, i, j), VarKind::continuous, 0,
                                  std::max(big_m, 0.0));
    d.m.add_constr(LinExpr(beta) + LinExpr(xi) - LinExpr(d.x[l], coef[k]), Sense::ge, 0.0,
                   fmt::format("dual_{}_{}_{}", tag, i, j));
    if (d.t.empty() || big_m <= 0.0) {
      out.add(xi, 1.0);
      continue;
    }
    if (!d.enhanced) {
      out.add(xi, 1.0);
      LinExpr lc(xi, -1.0);
      for (int r = 0; r < inst.num_levels; ++r) {
        const double g = inst.gamma(i, j, r);
        if (g == 0.0) continue;
        const VarRef p = mccormick_bin_cont(d.m, d.t[inst.level(i, j, r)], xi, big_m,
                                            fmt::format("T_{}_{}_{}_{}", tag, i, j, r + 1));
        out.add(p, -g);
        lc.add(p, 1.0);
      }
      // At most one level is active, so the products sum to at most xi.
      if (d.cuts)
        d.m.add_constr(std::move(lc), Sense::le, 0.0, fmt::format("onelevel_{}_{}_{}", tag, i, j));
    } else {
      // (1 - sum gamma t) xi = (1 - sum gamma) xi + sum gamma (1 - t) xi, and
      // V >= gamma xi - gamma M t stands for gamma (1 - t) xi.
      double keep = 1.0;
      LinExpr lc;
      double gsum = 0.0, gmax = 0.0;
      for (int r = 0; r < inst.num_levels; ++r) {
        const double g = inst.gamma(i, j, r);
        if (g == 0.0) continue;
        keep -= g;
        const double vm = g * big_m;
        const std::string name = fmt::format("V_{}_{}_{}_{}", tag, i, j, r + 1);
        const VarRef v = d.m.add_var(name, VarKind::continuous, 0, vm);
        d.m.add_constr(LinExpr(v) - LinExpr(xi, g) + LinExpr(d.t[inst.level(i, j, r)], vm),
                       Sense::ge, 0.0, name + "_lb");
        out.add(v, 1.0);
        lc.add(v, 1.0);
        gsum += g;
        gmax = std::max(gmax, g);
      }
      lc.add(xi, -(gsum - gmax));
      // Same fact from the other side: at most one (1 - t) is zero.
      if (d.cuts)
        d.m.add_constr(std::move(lc), Sense::ge, 0.0, fmt::format("onelevel_{}_{}_{}", tag, i, j));
      out.add(xi, keep);
    }
  }
  return out;
}

BuiltModel build_robust(const Instance& inst, Formulation kind, const BuildOptions& opt) {
  const bool hardening = kind != Formulation::ro_nh;
  const bool enhanced = kind == Formulation::erddu;
  const double gamma_budget =
      hardening ? inst.uncertainty_budget_ddu : inst.uncertainty_budget_diu;

  BuiltModel b;
  b.kind = kind;
  b.model = MilpModel(std::string(formulation_name(kind)));
  MilpModel& m = b.model;
  LinExpr cost;
  if (hardening) cost = add_hardening(m, inst, b.t);
  auto a = add_allocation(m, inst, "");
  b.x = a.x;
  b.w = a.w;
  std::vector<LinExpr> sq;
  if (hardening) sq = add_squares(m, inst, b.x, "", opt);

  DualBlock d{inst, m, b.t, b.x, enhanced, opt.valid_cuts};
  const double rho = inst.delay_penalty;

  // Worst-case allocation cost.
  cost += unmet_cost(inst, b.w);
  std::vector<std::pair<int, int>> all;
  std::vector<double> obj_coef;
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j) {
      const auto l = inst.link(i, j);
      cost.add(b.x[l], rho * inst.dmin(i, j));
      if (hardening) cost.add(sq[l], rho * inst.ddev(i, j) * inst.u(i, j));
      all.emplace_back(i, j);
      obj_coef.push_back(rho * inst.ddev(i, j));
    }
  cost += robust_term(d, all, obj_coef, gamma_budget, "obj");

  for (int i = 0; i < inst.num_areas; ++i) {
    if (inst.demand[static_cast<std::size_t>(i)] == 0) continue;
    const double li = lam(inst, i);
    LinExpr e;
    std::vector<std::pair<int, int>> mine;
    std::vector<double> coef;
    for (int j = 0; j < inst.num_nodes; ++j) {
      const auto l = inst.link(i, j);
      e.add(b.x[l], inst.dmin(i, j) / li);
      if (hardening) e.add(sq[l], inst.ddev(i, j) * inst.u(i, j) / li);
      mine.emplace_back(i, j);
      coef.push_back(inst.ddev(i, j) / li);
    }
    e += robust_term(d, mine, coef, gamma_budget, fmt::format("d{}", i));
    m.add_constr(std::move(e), Sense::le, inst.delay_cap[static_cast<std::size_t>(i)],
                 fmt::format("delay_{}", i));
  }

  if (hardening) {
    b.eta = m.add_var("eta", VarKind::continuous, -kInf, kInf);
    m.add_constr(LinExpr(*b.eta) - cost, Sense::ge, 0.0, "epigraph");
    m.set_objective(LinExpr(*b.eta));
  } else {
    m.set_objective(std::move(cost));
  }
  return b;
}

}  // namespace

BuiltModel build_det(const Instance& inst) { return build_nominal(inst, true, "det"); }
BuiltModel build_nh(const Instance& inst) { return build_nominal(inst, false, "nh"); }
BuiltModel build_ro_nh(const Instance& inst) { return build_robust(inst, Formulation::ro_nh, {}); }
BuiltModel build_rddu(const Instance& inst, const BuildOptions& opt) {
  return build_robust(inst, Formulation::rddu, opt);
}
BuiltModel build_erddu(const Instance& inst, const BuildOptions& opt) {
  return build_robust(inst, Formulation::erddu, opt);
}

BuiltModel build_sddu(const Instance& inst, const SdduScenarioSet& scen, const BuildOptions& opt) {
  if (scen.draws.empty() || scen.draws.size() != scen.probs.size())
    throw InvalidConfig("stochastic model needs a nonempty scenario set");
  BuiltModel b;
  b.kind = Formulation::sddu;
  b.model = MilpModel("sddu");
  MilpModel& m = b.model;
  LinExpr obj = add_hardening(m, inst, b.t);
  const double rho = inst.delay_penalty;

  for (std::size_t n = 0; n < scen.draws.size(); ++n) {
    const double xi = scen.draws[n];
    const std::string sfx = fmt::format("_s{}", n + 1);
    auto a = add_allocation(m, inst, sfx);
    if (n == 0) {
      b.x = a.x;
      b.w = a.w;
    }
    std::vector<LinExpr> sq;
    if (xi > 0.0) sq = add_squares(m, inst, a.x, sfx, opt);

    // Realized delay times x, per link: d̄ x + xi d̂ (x - sum gamma t x + u x^2).
    std::vector<LinExpr> dx(inst.num_links());
    for (int i = 0; i < inst.num_areas; ++i)
      for (int j = 0; j < inst.num_nodes; ++j) {
        const auto l = inst.link(i, j);
        const double dev = xi * inst.ddev(i, j);
        LinExpr& e = dx[l];
        e.add(a.x[l], inst.dmin(i, j) + dev);
        if (dev == 0.0) continue;
        const auto bound = inst.alloc_bound(i, j);
        if (bound >= 1)
          for (int r = 0; r < inst.num_levels; ++r) {
            const double g = inst.gamma(i, j, r);
            if (g == 0.0) continue;
            const VarRef z = product_bin_int(m, b.t[inst.level(i, j, r)], a.x[l],
                                             static_cast<double>(bound),
                                             fmt::format("Z_{}_{}_{}{}", i, j, r + 1, sfx));
            e.add(z, -dev * g);
          }
        e.add(sq[l], dev * inst.u(i, j));
      }

    LinExpr cost = unmet_cost(inst, a.w);
    for (std::size_t l = 0; l < dx.size(); ++l) cost.add(dx[l], rho);
    obj.add(cost, scen.probs[n]);

    for (int i = 0; i < inst.num_areas; ++i) {
      if (inst.demand[static_cast<std::size_t>(i)] == 0) continue;
      LinExpr e;
      for (int j = 0; j < inst.num_nodes; ++j) e.add(dx[inst.link(i, j)], 1.0 / lam(inst, i));
      m.add_constr(std::move(e), Sense::le, inst.delay_cap[static_cast<std::size_t>(i)],
                   fmt::format("delay_{}{}", i, sfx));
    }
  }
  m.set_objective(std::move(obj));
  return b;
}

BuiltModel build_actual(const Instance& inst, std::span<const int> t, std::span<const double> g,
                        const BuildOptions& opt) {
  if (g.size() != inst.num_links() ||
      t.size() != inst.num_links() * static_cast<std::size_t>(inst.num_levels))
    throw InvalidConfig("scenario or hardening plan does not match the instance");
  BuiltModel b;
  b.kind = Formulation::actual;
  b.model = MilpModel("actual");
  MilpModel& m = b.model;
  auto a = add_allocation(m, inst, "");
  b.x = a.x;
  b.w = a.w;
  const auto sq = add_squares(m, inst, b.x, "", opt);
  std::vector<LinExpr> dx(inst.num_links());
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j) {
      const auto l = inst.link(i, j);
      dx[l].add(b.x[l], inst.dmin(i, j) + inst.ddev(i, j) * g[l]);
      dx[l].add(sq[l], inst.ddev(i, j) * inst.u(i, j));
    }
  LinExpr obj = unmet_cost(inst, b.w);
  for (const auto& e : dx) obj.add(e, inst.delay_penalty);
  for (int i = 0; i < inst.num_areas; ++i) {
    if (inst.demand[static_cast<std::size_t>(i)] == 0) continue;
    LinExpr e;
    for (int j = 0; j < inst.num_nodes; ++j) e.add(dx[inst.link(i, j)], 1.0 / lam(inst, i));
    m.add_constr(std::move(e), Sense::le, inst.delay_cap[static_cast<std::size_t>(i)],
                 fmt::format("delay_{}", i));
  }
  m.set_objective(std::move(obj));
  return b;
}

BuiltModel build(const Instance& inst, Formulation f, const SdduScenarioSet* scenarios,
                 const BuildOptions& opt) {
  switch (f) {
    case Formulation::det: return build_det(inst);
    case Formulation::nh: return build_nh(inst);
    case Formulation::ro_nh: return build_ro_nh(inst);
    case Formulation::rddu: return build_rddu(inst, opt);
    case Formulation::erddu: return build_erddu(inst, opt);
    case Formulation::sddu:
      if (!scenarios) throw InvalidConfig("stochastic model needs a scenario set");
      return build_sddu(inst, *scenarios, opt);
    case Formulation::actual: break;
  }
  throw InvalidConfig("unknown formulation");
}

Solution empty_solution(const Instance& inst) {
  Solution s;
  s.num_areas = inst.num_areas;
  s.num_nodes = inst.num_nodes;
  s.num_levels = inst.num_levels;
  s.t.assign(inst.num_links() * static_cast<std::size_t>(inst.num_levels), 0);
  s.x.assign(inst.num_links(), 0);
  s.w = inst.demand;
  return s;
}

double hardening_payment(const Instance& inst, std::span<const int> t) {
  double pay = 0.0;
  for (std::size_t k = 0; k < t.size() && k < inst.harden_cost.size(); ++k)
    if (t[k]) pay += inst.harden_cost[k];
  return pay;
}

std::vector<std::string> check_solution(const Instance& inst, const Solution& s) {
  std::vector<std::string> out;
  const auto E = inst.num_links();
  const auto R = static_cast<std::size_t>(inst.num_levels);
  if (s.num_areas != inst.num_areas || s.num_nodes != inst.num_nodes ||
      s.num_levels != inst.num_levels || s.t.size() != E * R || s.x.size() != E ||
      s.w.size() != static_cast<std::size_t>(inst.num_areas)) {
    out.push_back("solution dimensions do not match the instance");
    return out;
  }
  double pay = 0.0;
  for (int i = 0; i < inst.num_areas; ++i)
    for (int j = 0; j < inst.num_nodes; ++j) {
      int levels = 0;
      for (int r = 0; r < inst.num_levels; ++r) {
        const int v = s.t[inst.level(i, j, r)];
        if (v != 0 && v != 1) out.push_back(fmt::format("t[{}][{}][{}] = {} is not binary", i, j, r, v));
        levels += v;
        if (v) pay += inst.h(i, j, r);
      }
      if (levels > 1) out.push_back(fmt::format("level_{}_{}: {} levels chosen", i, j, levels));
      const auto x = s.x[inst.link(i, j)];
      if (x < 0 || x > inst.alloc_bound(i, j))
        out.push_back(fmt::format("x[{}][{}] = {} outside [0, {}]", i, j, x, inst.alloc_bound(i, j)));
    }
  if (pay > inst.budget + 1e-9)
    out.push_back(fmt::format("budget: payment {} exceeds {}", pay, inst.budget));
  for (int j = 0; j < inst.num_nodes; ++j) {
    std::int64_t load = 0;
    for (int i = 0; i < inst.num_areas; ++i) load += s.x[inst.link(i, j)];
    if (load > inst.capacity[static_cast<std::size_t>(j)])
      out.push_back(fmt::format("cap_{}: load {} exceeds {}", j, load, inst.capacity[static_cast<std::size_t>(j)]));
  }
  for (int i = 0; i < inst.num_areas; ++i) {
    const auto k = static_cast<std::size_t>(i);
    std::int64_t served = 0;
    for (int j = 0; j < inst.num_nodes; ++j) served += s.x[inst.link(i, j)];
    if (served + s.w[k] != inst.demand[k])
      out.push_back(fmt::format("demand_{}: {} served + {} unmet != {}", i, served, s.w[k], inst.demand[k]));
    if (s.w[k] < 0 || s.w[k] > inst.max_unmet(i))
      out.push_back(fmt::format("qos_{}: unmet {} outside [0, {}]", i, s.w[k], inst.max_unmet(i)));
  }
  return out;
}

Solution extract_solution(const Instance& inst, const BuiltModel& b, std::span<const double> values) {
  if (values.size() != b.model.num_vars())
    throw CorruptSolution(fmt::format("expected {} values, got {}", b.model.num_vars(), values.size()));
  auto integral = [&](VarRef v) {
    const double raw = values[v.index];
    const double r = std::round(raw);
    if (!(std::abs(raw - r) <= 1e-6))
      throw CorruptSolution(fmt::format("{} = {} is not integral", b.model.var(v).name, raw));
    return static_cast<std::int64_t>(r);
  };
  Solution s = empty_solution(inst);
  s.formulation = std::string(formulation_name(b.kind));
  for (std::size_t k = 0; k < b.t.size(); ++k) s.t[k] = static_cast<int>(integral(b.t[k]));
  for (std::size_t k = 0; k < b.x.size(); ++k) s.x[k] = integral(b.x[k]);
  for (std::size_t k = 0; k < b.w.size(); ++k) s.w[k] = integral(b.w[k]);
  const auto problems = check_solution(inst, s);
  if (!problems.empty()) throw CorruptSolution(problems.front());
  s.objective = b.model.objective().evaluate(values);
  s.hardening_payment = hardening_payment(inst, s.t);
  s.allocation_cost = s.objective - s.hardening_payment;
  return s;
}

namespace {
constexpr std::string_view kMagic = "edgeharden-solution";
}

std::string solution_to_text(const Solution& s) {
  textfile::Writer w(kMagic, 1);
  const auto I = static_cast<std::size_t>(s.num_areas);
  const auto J = static_cast<std::size_t>(s.num_nodes);
  const auto R = static_cast<std::size_t>(s.num_levels);
  w.scalar("formulation", s.formulation.empty() ? std::string_view("none") : s.formulation);
  w.scalar("num_areas", static_cast<std::int64_t>(s.num_areas));
  w.scalar("num_nodes", static_cast<std::int64_t>(s.num_nodes));
  w.scalar("num_levels", static_cast<std::int64_t>(s.num_levels));
  w.scalar("objective", s.objective);
  w.scalar("hardening_payment", s.hardening_payment);
  w.scalar("allocation_cost", s.allocation_cost);
  w.array("t", {I, J, R}, std::vector<std::int64_t>(s.t.begin(), s.t.end()));
  w.array("x", {I, J}, s.x);
  w.array("w", {I}, s.w);
  return w.str();
}

Solution solution_from_text(const std::string& text, std::vector<std::string>* warnings) {
  textfile::Reader rd(text, kMagic);
  Solution s;
  s.formulation = rd.word("formulation");
  if (s.formulation == "none") s.formulation.clear();
  auto count = [&](const char* key) {
    const auto v = rd.integer(key);
    if (v < 1 || v > 1'000'000) throw ParseError("count out of range", 0, key);
    return static_cast<int>(v);
  };
  s.num_areas = count("num_areas");
  s.num_nodes = count("num_nodes");
  s.num_levels = count("num_levels");
  const auto I = static_cast<std::size_t>(s.num_areas);
  const auto J = static_cast<std::size_t>(s.num_nodes);
  const auto R = static_cast<std::size_t>(s.num_levels);
  s.objective = rd.scalar("objective");
  s.hardening_payment = rd.scalar("hardening_payment");
  s.allocation_cost = rd.scalar("allocation_cost");
  const auto t = rd.int_array("t", {I, J, R});
  s.t.assign(t.begin(), t.end());
  s.x = rd.int_array("x", {I, J});
  s.w = rd.int_array("w", {I});
  if (warnings)
    for (const auto& key : rd.unused_keys()) warnings->push_back("unknown field '" + key + "' ignored");
  return s;
}

void save_solution(const Solution& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << solution_to_text(s);
  if (!out) throw Error("write failed: " + path.string());
}

Solution load_solution(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return solution_from_text(ss.str(), warnings);
}

}  // namespace edgeharden
