// Solver backend that runs the cbc executable on an exported MPS file.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "edgeharden/errors.hpp"
#include "edgeharden/solver.hpp"

namespace edgeharden {

namespace fs = std::filesystem;

std::string cbc_path() {
  if (const char* env = std::getenv("EDGEHARDEN_CBC"); env && *env) return env;
  if (const char* path = std::getenv("PATH")) {
    std::stringstream ss(path);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
      if (dir.empty()) continue;
      const fs::path p = fs::path(dir) / "cbc";
      if (::access(p.c_str(), X_OK) == 0) return p.string();
    }
  }
#ifdef EDGEHARDEN_DEFAULT_CBC
  if (::access(EDGEHARDEN_DEFAULT_CBC, X_OK) == 0) return EDGEHARDEN_DEFAULT_CBC;
#endif
  return {};
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

std::string tail(const std::string& s, std::size_t n) {
  return s.size() <= n ? s : "..." + s.substr(s.size() - n);
}

// Removes the scratch directory on every exit path.
struct ScratchDir {
  fs::path path;
  ScratchDir() {
    static std::atomic<unsigned> counter{0};
    path = fs::temp_directory_path() /
           fmt::format("edgeharden-cbc-{}-{}", ::getpid(), counter.fetch_add(1));
    fs::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

class CbcBackend final : public Backend {
 public:
  std::string name() const override { return "cbc"; }

  bool available(std::string* reason) const override {
    if (!cbc_path().empty()) return true;
    if (reason)
      *reason = "cbc executable not found; install CBC or point EDGEHARDEN_CBC at the binary";
    return false;
  }

  SolverResult run(const MilpModel& model, const SolverConfig& config) const override {
    const std::string exe = cbc_path();
    if (exe.empty()) throw EnvironmentError("cbc executable not found; set EDGEHARDEN_CBC");
    const ExportedModel mps = write_mps(model);
    ScratchDir dir;
    const fs::path model_file = dir.path / "model.mps";
    const fs::path sol_file = dir.path / "model.sol";
    {
      std::ofstream out(model_file, std::ios::binary);
      out << mps.text;
      if (!out) throw EnvironmentError("cannot write " + model_file.string());
    }
    std::string cmd = fmt::format("{} {} -sec {} -ratioGap {} -randomCbcSeed {}", quote(exe),
                                  quote(model_file.string()), config.time_limit, config.mip_gap,
                                  config.seed % 2147483647u + 1);
    if (config.threads > 1) cmd += fmt::format(" -threads {}", config.threads);
    if (!config.start.empty()) {
      // Same layout as cbc's own solution files: index, name, value.
      const fs::path start_file = dir.path / "start.sol";
      std::ofstream out(start_file);
      out << "Feasible - objective value 0\n";
      for (std::size_t k = 0; k < config.start.size(); ++k)
        if (!std::isnan(config.start[k]))
          out << fmt::format("{} {} {:.17g} 0\n", k, mps.columns[k], config.start[k]);
      if (!out) throw EnvironmentError("cannot write " + start_file.string());
      cmd += fmt::format(" -mipstart {}", quote(start_file.string()));
    }
    cmd += fmt::format(" -printingOptions all -solve -solu {} 2>&1", quote(sol_file.string()));

    std::string output;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw EnvironmentError("failed to start cbc: " + exe);
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    const int rc = ::pclose(pipe);

    SolverResult res;
    std::ifstream in(sol_file);
    std::string header;
    if (!in || !std::getline(in, header)) {
      res.status = SolveStatus::error;
      res.message = fmt::format("cbc exited with status {} and wrote no solution: {}", rc,
                                tail(output, 2000));
      return res;
    }
    return parse(model, mps, header, in, output);
  }

 private:
  static SolverResult parse(const MilpModel& model, const ExportedModel& mps,
                            const std::string& header, std::istream& in, const std::string& output) {
    SolverResult res;
    const bool stopped = header.rfind("Stopped", 0) == 0;
    if (header.rfind("Optimal", 0) == 0) {
      res.status = SolveStatus::optimal;
    } else if (header.find("nfeasible") != std::string::npos) {
      res.status = SolveStatus::infeasible;
      return res;
    } else if (header.rfind("Unbounded", 0) == 0) {
      res.status = SolveStatus::unbounded;
      return res;
    } else if (stopped) {
      if (output.find("No feasible solution found") != std::string::npos) {
        res.status = SolveStatus::timeout;
        res.message = header;
        return res;
      }
      res.status = SolveStatus::feasible;
      res.message = "stopped early: " + header;
    } else {
      res.status = SolveStatus::error;
      res.message = "unrecognized cbc status line: " + header;
      return res;
    }
    if (auto pos = header.find("objective value"); pos != std::string::npos)
      res.objective = std::strtod(header.c_str() + pos + 15, nullptr);

    // Row activities come first, then one line per column in model order.
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
    const std::size_t rows = model.num_rows();
    if (lines.size() != rows + model.num_vars()) {
      res.status = SolveStatus::error;
      res.message = fmt::format("cbc solution has {} lines, expected {}", lines.size(),
                                rows + model.num_vars());
      return res;
    }
    res.values.resize(model.num_vars());
    for (std::size_t k = 0; k < model.num_vars(); ++k) {
      std::istringstream ls(lines[rows + k]);
      std::string idx, name;
      double value = 0;
      ls >> idx;
      if (idx == "**") ls >> idx;
      ls >> name >> value;
      if (!ls || name != mps.columns[k]) {
        res.status = SolveStatus::error;
        res.message = "cbc solution line does not match column " + mps.columns[k] + ": " + lines[rows + k];
        res.values.clear();
        return res;
      }
      res.values[k] = value;
    }
    res.bound = res.objective;
    if (auto pos = output.find("Lower bound:"); pos != std::string::npos)
      res.bound = std::strtod(output.c_str() + pos + 12, nullptr);
    return res;
  }
};

}  // namespace

std::shared_ptr<Backend> make_cbc_backend() { return std::make_shared<CbcBackend>(); }

}  // namespace edgeharden
