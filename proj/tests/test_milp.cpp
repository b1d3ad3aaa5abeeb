#include <doctest.h>

#include <cmath>
#include <vector>

#include "edgeharden/errors.hpp"
#include "edgeharden/milp.hpp"

using namespace edgeharden;

namespace {

MilpModel golden() {
  MilpModel m("golden");
  auto x = m.add_var("x", VarKind::integer, 0, kInf);
  m.add_constr(LinExpr(x), Sense::ge, 1, "c1");
  m.set_objective(LinExpr(x));
  return m;
}

constexpr const char* kGoldenMps =
    "NAME          golden\n"
    "ROWS\n"
    " N  OBJ\n"
    " G  c1\n"
    "COLUMNS\n"
    "    MARKER0   'MARKER'                 'INTORG'\n"
    "    x         OBJ       1\n"
    "    x         c1        1\n"
    "    MARKER1   'MARKER'                 'INTEND'\n"
    "RHS\n"
    "    RHS       c1        1\n"
    "BOUNDS\n"
    " LO BND       x         0\n"
    " PL BND       x\n"
    "ENDATA\n";

constexpr const char* kGoldenLp =
    "\\ Problem name: golden\n"
    "Minimize\n"
    " obj: + 1 x\n"
    "Subject To\n"
    " c1: + 1 x >= 1\n"
    "Bounds\n"
    " 0 <= x <= +inf\n"
    "Generals\n"
    " x\n"
    "End\n";

}  // namespace

TEST_CASE("add_var issues stable references") {
  MilpModel m;
  auto t = m.add_var("t_0_0_1", VarKind::binary, 0, 1);
  CHECK(t.index == 0);
  auto x = m.add_var("x_0_0", VarKind::integer, 0, 40);
  CHECK(m.var(x).lower == 0);
  CHECK(m.var(x).upper == 40);
  CHECK(m.var(x).kind == VarKind::integer);
  CHECK_THROWS_AS(m.add_var("x_0_0", VarKind::continuous, 0, 1), ModelError);
  CHECK_THROWS_AS(m.add_var("bad", VarKind::continuous, 2, 1), ModelError);
  auto b = m.add_var("b", VarKind::binary, -3, 7);
  CHECK(m.var(b).lower == 0);
  CHECK(m.var(b).upper == 1);
}

TEST_CASE("add_constr appends, normalizes and rejects foreign refs") {
  MilpModel m, other;
  auto x = m.add_var("x", VarKind::continuous, 0, kInf);
  auto y = other.add_var("y", VarKind::continuous, 0, kInf);
  CHECK(m.add_constr(LinExpr(x), Sense::le, 5, "a") == 0);
  CHECK(m.stats().rows == 1);

  LinExpr e(x);
  e.add(x, 1.0).add_constant(3.0);
  m.add_constr(e, Sense::le, 7, "b");
  const auto& row = m.constraints().back();
  REQUIRE(row.expr.terms().size() == 1);
  CHECK(row.expr.terms()[0].second == 2.0);
  CHECK(row.rhs == 4.0);

  CHECK_THROWS_AS(m.add_constr(LinExpr(y), Sense::le, 1, "c"), ModelError);
}

TEST_CASE("normalize drops zeros and keeps first-occurrence order") {
  MilpModel m;
  auto a = m.add_var("a", VarKind::continuous, 0, 1);
  auto b = m.add_var("b", VarKind::continuous, 0, 1);
  LinExpr e(b, 2.0);
  e.add(a, 1.0).add(b, -2.0).add(a, 0.5);
  e.normalize();
  REQUIRE(e.terms().size() == 1);
  CHECK(e.terms()[0].first == a);
  CHECK(e.terms()[0].second == 1.5);
  const std::vector<double> vals{2.0, 9.0};
  CHECK(e.evaluate(vals) == 3.0);
}

TEST_CASE("stats counts rows, columns and kinds") {
  MilpModel m;
  auto x = m.add_var("x", VarKind::integer, 0, 4);
  auto y = m.add_var("y", VarKind::binary, 0, 1);
  m.add_constr(LinExpr(x) + LinExpr(y), Sense::le, 3, "r1");
  m.add_constr(LinExpr(x), Sense::ge, 1, "r2");
  m.add_constr(LinExpr(y), Sense::eq, 1, "r3");
  auto s = m.stats();
  CHECK(s.rows == 3);
  CHECK(s.cols == 2);
  CHECK(s.integers == 1);
  CHECK(s.binaries == 1);
  CHECK(s.continuous == 0);
  CHECK(s.nonzeros == 4);
  CHECK(s.cols == s.binaries + s.integers + s.continuous);
  m.add_constr(LinExpr(x), Sense::le, 4, "r4");
  CHECK(m.stats().rows == s.rows + 1);
}

TEST_CASE("violation measures") {
  MilpModel m;
  auto x = m.add_var("x", VarKind::integer, 0, 10);
  m.add_constr(LinExpr(x, 100.0), Sense::le, 200, "cap");
  std::vector<double> ok{2.0}, over{3.0}, frac{1.5};
  CHECK(m.max_violation(ok).first == 0.0);
  auto [v, where] = m.max_violation(over);
  CHECK(v == doctest::Approx(100.0));
  CHECK(where == "cap");
  CHECK(m.scaled_violation(over).first == doctest::Approx(100.0 / 300.0));
  CHECK(m.max_violation(frac).first == doctest::Approx(0.5));
}

TEST_CASE("golden MPS and LP output") {
  CHECK(write_mps(golden()).text == kGoldenMps);
  CHECK(write_lp(golden()).text == kGoldenLp);
  CHECK(write_mps(golden()).text == write_mps(golden()).text);
}

TEST_CASE("empty model cannot be exported") {
  MilpModel m;
  CHECK_THROWS_AS(write_mps(m), ModelError);
  CHECK_THROWS_AS(write_lp(m), ModelError);
}

TEST_CASE("long names are mangled reversibly") {
  MilpModel m;
  const std::string long_name(300, 'a');
  auto y = m.add_var(long_name, VarKind::binary, 0, 1);
  m.add_var("short_name", VarKind::continuous, 0, 5);
  m.add_var("C_0", VarKind::continuous, 0, 1);
  m.add_constr(LinExpr(y), Sense::le, 1, "row with space");
  m.set_objective(LinExpr(y));
  for (const auto& out : {write_mps(m), write_lp(m)}) {
    REQUIRE(out.columns.size() == 3);
    CHECK(out.columns[1] == "short_name");
    CHECK(out.columns[2] == "C_0");
    CHECK(out.columns[0] != long_name);
    CHECK(out.columns[0] != "C_0");
    CHECK(out.text.find(long_name) == std::string::npos);
    REQUIRE(out.mangled.count(out.columns[0]) == 1);
    CHECK(out.mangled.at(out.columns[0]) == long_name);
    CHECK(out.mangled.at(out.rows[0]) == "row with space");
    CHECK(sidecar_text(out).find(out.columns[0] + " " + long_name) != std::string::npos);
  }
  const std::string ten(10, 'b');
  MilpModel n;
  n.add_var(ten, VarKind::continuous, 0, 1);
  CHECK(write_mps(n).mangled.empty());
}

TEST_CASE("coefficients keep 17 significant digits") {
  MilpModel m;
  auto x = m.add_var("x", VarKind::continuous, 0, 1);
  const double c = 0.1 + 0.2;
  m.add_constr(LinExpr(x, c), Sense::le, 1.0 / 3.0, "r");
  m.set_objective(LinExpr(x));
  const auto text = write_mps(m).text;
  CHECK(text.find("0.30000000000000004") != std::string::npos);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
}
