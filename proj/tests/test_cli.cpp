#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <regex>
#include <string>

#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(EDGEHARDEN_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (auto n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

double field(const std::string& out, const std::string& key) {
  std::smatch m;
  const std::regex re("(^|\n)" + key + "\\s+(\\S+)");
  REQUIRE(std::regex_search(out, m, re));
  return std::stod(m[2].str());
}

const std::string kSmall =
    "--areas 3 --nodes 3 --demand-min 5 --demand-max 10 --capacity-pool 5,10,15 --budget 3 "
    "--gamma2 3 --diu-budget 3 --alpha 0.2";

std::string slurp(const fs::path& f) {
  std::ifstream in(f, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const fs::path& f, const std::string& text) { std::ofstream(f, std::ios::binary) << text; }

std::string p(const fs::path& f) { return "'" + f.string() + "'"; }

}  // namespace

TEST_CASE("gen is deterministic and validates its arguments") {
  const auto dir = testutil::temp_dir("cli_gen");
  CHECK(cli("gen -o " + p(dir / "a.inst") + " --seed 7").code == 0);
  CHECK(cli("gen -o " + p(dir / "b.inst") + " --seed 7").code == 0);
  CHECK(slurp(dir / "a.inst") == slurp(dir / "b.inst"));
  CHECK(cli("gen -o " + p(dir / "c.inst") + " --seed 8").code == 0);
  CHECK(slurp(dir / "a.inst") != slurp(dir / "c.inst"));

  auto bad = cli("gen -o " + p(dir / "d.inst") + " --dgamma 0.5 --levels 3");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("delta_gamma") != std::string::npos);
  CHECK(cli("gen").code == 2);
  CHECK(cli("").code == 2);
}

TEST_CASE("solve, verify and the failure exit codes") {
  const auto dir = testutil::temp_dir("cli_solve");
  const auto inst = dir / "s.inst";
  REQUIRE(cli("gen -o " + p(inst) + " --seed 7 " + kSmall).code == 0);

  auto det = cli("solve " + p(inst) + " -f det --gap 1e-9 -o " + p(dir / "det.sol"));
  REQUIRE(det.code == 0);
  CHECK(field(det.out, "payment") == 0.0);
  CHECK(slurp(dir / "det.sol").find("t [3 3 3] 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n") !=
        std::string::npos);

  auto a = cli("solve " + p(inst) + " -f rddu --gap 1e-9 -o " + p(dir / "r.sol"));
  auto b = cli("solve " + p(inst) + " -f erddu --gap 1e-9 --export " + p(dir / "e.lp"));
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const double ra = field(a.out, "objective"), rb = field(b.out, "objective");
  CHECK(std::abs(ra - rb) <= 1e-6 * std::max(1.0, ra));
  CHECK(fs::exists(dir / "e.lp"));

  auto v = cli("verify " + p(inst) + " " + p(dir / "r.sol"));
  CHECK(v.code == 0);
  CHECK(v.out.find("PASS") != std::string::npos);

  SUBCASE("corrupted allocation fails verification") {
    auto text = slurp(dir / "r.sol");
    text = std::regex_replace(text, std::regex("\nx \\[3 3\\] \\d+"), "\nx [3 3] 1000");
    dump(dir / "bad.sol", text);
    auto r = cli("verify " + p(inst) + " " + p(dir / "bad.sol"));
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
  }
  SUBCASE("hardening beyond the budget fails verification") {
    auto text = slurp(dir / "r.sol");
    text = std::regex_replace(text, std::regex("\nt \\[3 3 3\\][^\n]*"),
                              "\nt [3 3 3] 0 0 1 0 0 1 0 0 1 0 0 1 0 0 1 0 0 1 0 0 1 0 0 1 0 0 1");
    dump(dir / "bad.sol", text);
    auto r = cli("verify " + p(inst) + " " + p(dir / "bad.sol"));
    CHECK(r.code == 1);
    CHECK(r.out.find("budget") != std::string::npos);
  }
  SUBCASE("usage errors") {
    CHECK(cli("solve " + p(inst) + " -f bogus").code == 2);
    CHECK(cli("solve " + p(inst) + " -f rddu --gap -1").code == 2);
    CHECK(cli("sweep " + p(inst) + " --param zeta --grid 1,2").code == 2);
    CHECK(cli("sweep " + p(inst) + " --param B --grid 1,x").code == 2);
    CHECK(cli("evaluate " + p(inst) + " --schemes NH,FOO").code == 2);
  }
  SUBCASE("unreadable files") {
    dump(dir / "broken.inst", "# edgeharden-instance 1\nnum_areas three\n");
    auto r = cli("solve " + p(dir / "broken.inst") + " -f det");
    CHECK(r.code == 3);
    CHECK(r.out.find("broken.inst") != std::string::npos);
    CHECK(cli("solve " + p(dir / "missing.inst") + " -f det").code == 3);
    CHECK(cli("verify " + p(inst) + " " + p(dir / "missing.sol")).code == 3);
  }
  SUBCASE("infeasible instance") {
    const auto tight = dir / "tight.inst";
    REQUIRE(cli("gen -o " + p(tight) + " --seed 7 " + kSmall + " --delta 0.1").code == 0);
    auto r = cli("solve " + p(tight) + " -f rddu");
    CHECK(r.code == 4);
    CHECK(r.out.find("infeasible") != std::string::npos);
  }
}

TEST_CASE("export, sweep and evaluate write their files") {
  const auto dir = testutil::temp_dir("cli_files");
  const auto inst = dir / "s.inst";
  REQUIRE(cli("gen -o " + p(inst) + " --seed 3 " + kSmall).code == 0);

  REQUIRE(cli("export " + p(inst) + " -f erddu -o " + p(dir / "m.mps")).code == 0);
  REQUIRE(cli("export " + p(inst) + " -f erddu -o " + p(dir / "m2.mps")).code == 0);
  CHECK(slurp(dir / "m.mps") == slurp(dir / "m2.mps"));

  auto s = cli("sweep " + p(inst) + " --param B --grid 0,3 --formulations nh,erddu --gap 1e-6 -o " +
               p(dir / "b.csv"));
  CHECK(s.code == 0);
  const auto csv = slurp(dir / "b.csv");
  CHECK(csv.rfind("B,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

  auto e = cli("evaluate " + p(inst) + " -N 10 --seed 1 --gap 1e-6 --out-dir " + p(dir / "ev"));
  CHECK(e.code == 0);
  CHECK(fs::exists(dir / "ev" / "summary.csv"));
  CHECK(fs::exists(dir / "ev" / "costs.csv"));
  CHECK(cli("probe").code == 0);
}
