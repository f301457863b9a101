// End-to-end checks of the `sharesim` binary: exit codes, file outputs, and
// agreement with in-library results. Takes the tool path as argv[1].

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sharesim/config_io.hpp"
#include "sharesim/estimators.hpp"
#include "sharesim/session_log.hpp"
#include "sharesim/simulator.hpp"

namespace fs = std::filesystem;
using namespace sharesim;

namespace {

int failures = 0;

#define EXPECT(cond, what)                                                        \
  do {                                                                            \
    if (!(cond)) {                                                                \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << what << "\n"; \
      ++failures;                                                                 \
    }                                                                             \
  } while (0)

std::string tool_path;
fs::path work_dir;

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CommandResult run_command(const std::string& args) {
  const fs::path capture = work_dir / "capture.txt";
  const std::string full = "\"" + tool_path + "\" " + args + " > \"" + capture.string() +
                           "\" 2>&1";
  const int status = std::system(full.c_str());
  CommandResult result;
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  std::ifstream in(capture);
  std::ostringstream text;
  text << in.rdbuf();
  result.output = text.str();
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Everything except '#' comment lines: the reproducible part of a log or table.
std::string data_section(const std::string& content) {
  std::istringstream in(content);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    out << line << '\n';
  }
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

const char* kStudyConfig = R"({
  "variants": [
    {"name": "control", "probability": 0.5, "gamma": 0.1},
    {"name": "treatment_a", "probability": 0.25, "gamma": 0.2},
    {"name": "treatment_b", "probability": 0.25, "gamma": 0.3}
  ],
  "sweep": {"sample_sizes": [100, 300, 1000], "repetitions": 8, "seed": 77}
})";

void test_version() {
  const CommandResult r = run_command("--version");
  EXPECT(r.exit_code == 0, "--version exits 0");
  EXPECT(r.output.find("sharesim 1.0.0") != std::string::npos, "--version names the tool");
  EXPECT(r.output.find("format") != std::string::npos, "--version names the format versions");
}

void test_usage_errors() {
  EXPECT(run_command("frobnicate 2>&1").exit_code == 2, "unknown subcommand is a usage error");
  EXPECT(run_command("simulate").exit_code == 2, "missing required flags is a usage error");
  const fs::path config = work_dir / "config.json";
  write_file(config, kStudyConfig);
  const CommandResult r = run_command("simulate --config " + config.string() +
                                      " --n 0 --out " + (work_dir / "x.csv").string());
  EXPECT(r.exit_code == 2, "n=0 is a usage error");
}

void test_config_errors() {
  const fs::path bad = work_dir / "bad.json";
  write_file(bad, R"({"variants": [
    {"probability": 0.5, "gamma": 0.1}, {"probability": 0.5, "gamma": 1.0}]})");
  const CommandResult r = run_command("simulate --config " + bad.string() + " --n 10 --out " +
                                      (work_dir / "x.csv").string());
  EXPECT(r.exit_code == 3, "invalid gamma is a config error");
  EXPECT(r.output.find("[0, 1)") != std::string::npos, "config error names the invariant");

  const CommandResult missing = run_command("simulate --config " + (work_dir / "nope.json").string() +
                                            " --n 10 --out " + (work_dir / "x.csv").string());
  EXPECT(missing.exit_code == 4, "missing config file is an io error");
}

void test_simulate_and_determinism() {
  const fs::path config = work_dir / "config.json";
  write_file(config, kStudyConfig);

  const fs::path log_a = work_dir / "a.csv";
  const fs::path log_b = work_dir / "b.csv";
  const fs::path log_c = work_dir / "c.csv";
  EXPECT(run_command("simulate --config " + config.string() + " --n 1000 --seed 5 --out " +
                     log_a.string()).exit_code == 0,
         "simulate succeeds");
  EXPECT(run_command("simulate --config " + config.string() + " --n 1000 --seed 5 --out " +
                     log_b.string()).exit_code == 0,
         "second simulate succeeds");
  EXPECT(run_command("simulate --config " + config.string() + " --n 1000 --seed 6 --out " +
                     log_c.string()).exit_code == 0,
         "third simulate succeeds");

  const std::string a = read_file(log_a);
  EXPECT(data_section(a) == data_section(read_file(log_b)),
         "equal seeds give byte-identical data sections");
  EXPECT(data_section(a) != data_section(read_file(log_c)), "different seeds differ");
  EXPECT(a.find("# manifest: ") != std::string::npos, "log embeds a manifest");

  // Every trajectory id appears and every chain ends with a reward-0 session.
  const ToolConfig tool_config = load_tool_config(config);
  const Dataset parsed = parse_session_log_file(log_a, tool_config.mdp.policy);
  EXPECT(parsed.trajectories.size() == 1000, "log holds 1000 trajectories");
  bool all_closed = true;
  for (const Trajectory& t : parsed.trajectories) {
    all_closed = all_closed && t.sessions.back().reward == 0;
  }
  EXPECT(all_closed, "every chain ends with a failed share");

  const fs::path unwritable = fs::path("/nonexistent-dir") / "x.csv";
  EXPECT(run_command("simulate --config " + config.string() + " --n 10 --out " +
                     unwritable.string()).exit_code == 4,
         "unwritable out path is an io error");
}

void test_estimate_round_trip() {
  const fs::path config = work_dir / "config.json";
  write_file(config, kStudyConfig);
  const fs::path log = work_dir / "estimate_log.csv";
  EXPECT(run_command("simulate --config " + config.string() + " --n 2000 --seed 11 --out " +
                     log.string()).exit_code == 0,
         "simulate for estimate succeeds");

  const fs::path report = work_dir / "report.csv";
  const CommandResult r = run_command("estimate --log " + log.string() + " --config " +
                                      config.string() + " --out " + report.string());
  EXPECT(r.exit_code == 0, "estimate succeeds");

  // The report's ATE rows must reproduce the in-library values bit-exactly.
  const ToolConfig tool_config = load_tool_config(config);
  const Dataset dataset = parse_session_log_file(log, tool_config.mdp.policy);
  const GammaEstimate gamma = estimate_gamma(dataset);

  std::ifstream in(report);
  std::string line;
  int ate_rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("ate,", 0) != 0) continue;
    ++ate_rows;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream split(line);
    while (std::getline(split, field, ',')) fields.push_back(field);
    const EstimatorKind kind = *parse_estimator_kind(fields[1]);
    const VariantId i{std::stoi(fields[2])};
    const VariantId j{std::stoi(fields[3])};
    const double reported = std::strtod(fields[4].c_str(), nullptr);
    double expected = 0.0;
    switch (kind) {
      case EstimatorKind::kNaive: expected = naive_ate(dataset, i, j); break;
      case EstimatorKind::kDiffInQs: expected = diff_in_qs_ate(dataset, i, j); break;
      case EstimatorKind::kDiffInGeometrics: expected = diff_in_geometrics_ate(gamma, i, j); break;
    }
    EXPECT(reported == expected, "report row matches the in-memory estimate bit-exactly");
  }
  EXPECT(ate_rows == 18, "3 estimators x 6 ordered pairs reported");
}

void test_estimate_errors_and_warnings() {
  const fs::path config = work_dir / "config.json";
  write_file(config, kStudyConfig);

  // Malformed line 17: sixteen valid single-session chains, then garbage.
  std::ostringstream bad_log;
  for (int k = 0; k < 16; ++k) bad_log << k << ",0," << (k % 3) << ",0\n";
  bad_log << "17,zero,0,0\n";
  const fs::path bad = work_dir / "bad_log.csv";
  write_file(bad, bad_log.str());
  const CommandResult r = run_command("estimate --log " + bad.string() + " --config " +
                                      config.string());
  EXPECT(r.exit_code == 4, "malformed log is an io error");
  EXPECT(r.output.find("line 17") != std::string::npos, "error names line 17");

  // A variant that never appears: warning, zero estimate, exit 0.
  const fs::path sparse = work_dir / "sparse_log.csv";
  write_file(sparse, "0,0,0,1\n0,1,0,0\n1,0,1,0\n");
  const CommandResult w = run_command("estimate --log " + sparse.string() + " --config " +
                                      config.string());
  EXPECT(w.exit_code == 0, "sparse log still estimates");
  EXPECT(w.output.find("never appears") != std::string::npos, "absent variant warns");
  EXPECT(w.output.find("warning") != std::string::npos, "warning is labelled");

  // All requested rows degenerate: numeric-degeneracy exit code.
  const fs::path two_variant_config = work_dir / "two.json";
  write_file(two_variant_config, R"({"variants": [
    {"probability": 0.5, "gamma": 0.1}, {"probability": 0.5, "gamma": 0.3}]})");
  const fs::path degenerate = work_dir / "degenerate_log.csv";
  write_file(degenerate, "0,0,1,1\n0,1,1,1\n0,2,1,1\n0,3,1,0\n");
  const CommandResult d = run_command("estimate --log " + degenerate.string() + " --config " +
                                      two_variant_config.string() +
                                      " --estimator diff_in_geometrics");
  EXPECT(d.exit_code == 5, "all-degenerate report is a numeric failure");

  // With the raw-reward estimators included the report survives.
  const CommandResult mixed = run_command("estimate --log " + degenerate.string() + " --config " +
                                          two_variant_config.string());
  EXPECT(mixed.exit_code == 0, "non-degenerate rows keep the exit code at 0");
  EXPECT(mixed.output.find("degenerate") != std::string::npos, "degenerate rows are flagged");
}

void test_sweep_and_report() {
  const fs::path config = work_dir / "config.json";
  write_file(config, kStudyConfig);

  const fs::path dir_a = work_dir / "sweep_w1";
  const fs::path dir_b = work_dir / "sweep_w8";
  EXPECT(run_command("sweep --config " + config.string() + " --out " + dir_a.string() +
                     " --workers 1").exit_code == 0,
         "sweep with 1 worker succeeds");
  EXPECT(run_command("sweep --config " + config.string() + " --out " + dir_b.string() +
                     " --workers 8").exit_code == 0,
         "sweep with 8 workers succeeds");

  int curve_files = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("mse_", 0) == 0 && name != "mse_combined.csv") ++curve_files;
  }
  EXPECT(curve_files == 9, "3 estimators x 3 pairs curve files");
  EXPECT(fs::exists(dir_a / "mse_combined.csv"), "combined table exists");
  EXPECT(fs::exists(dir_a / "manifest.json"), "sweep manifest exists");

  // Worker count must not show anywhere in the data files.
  bool identical = true;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    identical = identical && read_file(entry.path()) == read_file(dir_b / name);
  }
  EXPECT(identical, "sweep outputs are byte-identical across worker counts");

  const fs::path charts = work_dir / "charts";
  EXPECT(run_command("report --sweep-dir " + dir_a.string() + " --out " + charts.string())
             .exit_code == 0,
         "report succeeds");
  int svg_count = 0;
  for (const auto& entry : fs::directory_iterator(charts)) {
    if (entry.path().extension() == ".svg") {
      ++svg_count;
      const std::string svg = read_file(entry.path());
      EXPECT(svg.find("<polyline") != std::string::npos, "chart has mean lines");
      EXPECT(svg.find("<polygon") != std::string::npos, "chart has CI bands");
    }
  }
  EXPECT(svg_count == 3, "one chart per pair");

  EXPECT(run_command("report --sweep-dir " + (work_dir / "empty_dir").string() + " --out " +
                     charts.string()).exit_code == 4,
         "report on a missing sweep is an io error");

  // Single sample size: charts fall back to points with error bars.
  const fs::path single_config = work_dir / "single.json";
  write_file(single_config, R"({
    "variants": [
      {"probability": 0.5, "gamma": 0.1},
      {"probability": 0.5, "gamma": 0.3}
    ],
    "sweep": {"sample_sizes": [100], "repetitions": 4, "seed": 3}
  })");
  const fs::path single_dir = work_dir / "sweep_single";
  const fs::path single_charts = work_dir / "charts_single";
  EXPECT(run_command("sweep --config " + single_config.string() + " --out " +
                     single_dir.string()).exit_code == 0,
         "single-size sweep succeeds");
  EXPECT(run_command("report --sweep-dir " + single_dir.string() + " --out " +
                     single_charts.string()).exit_code == 0,
         "single-size report succeeds");
  const std::string svg = read_file(single_charts / "mse_pair_0_1.svg");
  EXPECT(svg.find("<circle") != std::string::npos, "single-size chart uses point markers");

  // A config without a sweep section cannot sweep.
  const fs::path no_sweep = work_dir / "no_sweep.json";
  write_file(no_sweep, R"({"variants": [
    {"probability": 0.5, "gamma": 0.1}, {"probability": 0.5, "gamma": 0.3}]})");
  EXPECT(run_command("sweep --config " + no_sweep.string() + " --out " +
                     (work_dir / "nope").string()).exit_code == 3,
         "config without sweep section is a config error");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <path-to-sharesim-binary>\n";
    return 2;
  }
  tool_path = argv[1];
  work_dir = fs::temp_directory_path() / ("sharesim_cli_" + std::to_string(::getpid()));
  fs::remove_all(work_dir);
  fs::create_directories(work_dir);

  test_version();
  test_usage_errors();
  test_config_errors();
  test_simulate_and_determinism();
  test_estimate_round_trip();
  test_estimate_errors_and_warnings();
  test_sweep_and_report();

  fs::remove_all(work_dir);
  if (failures == 0) {
    std::cout << "cli_tests: all checks passed\n";
    return 0;
  }
  std::cerr << "cli_tests: " << failures << " check(s) failed\n";
  return 1;
}
