#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sharesim/config_io.hpp"
#include "sharesim/errors.hpp"
#include "sharesim/estimators.hpp"
#include "sharesim/experiment.hpp"
#include "sharesim/manifest.hpp"
#include "sharesim/session_log.hpp"
#include "sharesim/simulator.hpp"
#include "sharesim/svg_report.hpp"
#include "sharesim/sweep_io.hpp"
#include "sharesim/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace sharesim;

// Exit codes, one per failure class.
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;       // unreadable/unwritable/malformed files
constexpr int kExitNumeric = 5;  // degenerate estimates, chain cap exceeded

std::string version_string() {
  return std::string("sharesim ") + kToolVersion + " (session-log format " +
         std::to_string(kSessionLogFormatVersion) + ", sweep-table format " +
         std::to_string(kSweepTableFormatVersion) + ")";
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

struct EstimateRow {
  EstimatorKind kind;
  std::int32_t variant_i;
  std::int32_t variant_j;
  double value;
  bool degenerate;
};

int run_simulate(const std::vector<std::string>& argv, const fs::path& config_path,
                 std::int64_t n, std::uint64_t seed, std::uint64_t stream,
                 const fs::path& out_path) {
  const ToolConfig config = load_tool_config(config_path);
  const SimulationSeed sim_seed{seed, stream};
  const Dataset dataset = sample_dataset(config.mdp, SamplingPolicy::production(), config.knob,
                                         sim_seed, n);

  RunManifest manifest = make_manifest(argv, sim_seed, tool_config_to_json(config));
  manifest.parameters["n_trajectories"] = std::to_string(n);
  manifest.parameters["out"] = out_path.string();

  const std::vector<std::string> comments = {
      "sharesim session log v" + std::to_string(kSessionLogFormatVersion),
      "manifest: " + manifest_to_json(manifest),
  };
  write_session_log_file(out_path, dataset, comments);
  std::cout << "wrote " << dataset.trajectories.size() << " trajectories ("
            << dataset.session_count() << " sessions) to " << out_path.string() << "\n";
  return kExitOk;
}

int run_estimate(const std::vector<std::string>& argv, const fs::path& log_path,
                 const fs::path& config_path, const std::vector<std::string>& estimator_names,
                 const std::optional<fs::path>& out_path) {
  const ToolConfig config = load_tool_config(config_path);
  const Dataset dataset = parse_session_log_file(log_path, config.mdp.policy);
  if (dataset.trajectories.empty()) {
    throw EmptyDatasetError(log_path.string() + " contains no sessions");
  }

  std::vector<EstimatorKind> kinds;
  if (estimator_names.empty()) {
    kinds.assign(kAllEstimators.begin(), kAllEstimators.end());
  } else {
    for (const std::string& name : estimator_names) {
      const auto kind = parse_estimator_kind(name);
      if (!kind) throw ConfigError("unknown estimator '" + name + "'");
      kinds.push_back(*kind);
    }
  }

  const GammaEstimate gamma = estimate_gamma(dataset);
  const auto variants = static_cast<std::int32_t>(config.mdp.variant_count());
  for (std::int32_t a = 0; a < variants; ++a) {
    if (gamma.session_count[static_cast<std::size_t>(a)] == 0) {
      std::cerr << "warning: variant " << a << " (" << config.variant_names[static_cast<std::size_t>(a)]
                << ") never appears in the log; its continuation estimate is 0\n";
    }
  }

  // All ordered pairs per estimator; mirrors come from the antisymmetric
  // matrix, degenerate pairs are flagged instead of aborting the report.
  std::vector<EstimateRow> rows;
  for (EstimatorKind kind : kinds) {
    const std::vector<PairEstimate> upper = estimate_all_pairs(dataset, kind);
    for (const PairEstimate& pe : upper) {
      rows.push_back({kind, pe.variant_i, pe.variant_j, pe.value, pe.degenerate});
      rows.push_back({kind, pe.variant_j, pe.variant_i, -pe.value, pe.degenerate});
    }
  }

  std::cout << "gamma estimates (" << gamma.total_sessions << " sessions)\n";
  for (std::int32_t a = 0; a < variants; ++a) {
    const auto idx = static_cast<std::size_t>(a);
    std::cout << "  variant " << a << " (" << config.variant_names[idx]
              << "): gamma_hat=" << format_double(gamma.gamma_hat[idx])
              << " sessions=" << gamma.session_count[idx]
              << " weight_sum=" << format_double(gamma.weight_sum[idx]) << "\n";
  }
  std::cout << "treatment-effect estimates\n";
  for (const EstimateRow& row : rows) {
    std::cout << "  " << to_string(row.kind) << " (" << row.variant_i << "," << row.variant_j
              << "): " << (row.degenerate ? "degenerate" : format_double(row.value)) << "\n";
  }

  if (out_path) {
    RunManifest manifest = make_manifest(argv, SimulationSeed{}, tool_config_to_json(config));
    manifest.parameters["log"] = log_path.string();
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + out_path->string() + " for writing");
    out << "# sharesim estimate report\n"
        << "# manifest: " << manifest_to_json(manifest) << "\n"
        << "record,estimator,variant_i,variant_j,value,sessions,weight_sum,status\n";
    for (std::int32_t a = 0; a < variants; ++a) {
      const auto idx = static_cast<std::size_t>(a);
      out << "gamma,," << a << ",," << format_double(gamma.gamma_hat[idx]) << ','
          << gamma.session_count[idx] << ',' << format_double(gamma.weight_sum[idx]) << ",ok\n";
    }
    for (const EstimateRow& row : rows) {
      out << "ate," << to_string(row.kind) << ',' << row.variant_i << ',' << row.variant_j << ','
          << (row.degenerate ? "" : format_double(row.value)) << ",,,"
          << (row.degenerate ? "degenerate" : "ok") << "\n";
    }
    out.flush();
    if (!out) throw IoError("failed while writing " + out_path->string());
  }

  bool all_degenerate = !rows.empty();
  for (const EstimateRow& row : rows) {
    if (!row.degenerate) all_degenerate = false;
  }
  return all_degenerate ? kExitNumeric : kExitOk;
}

int run_sweep_cmd(const std::vector<std::string>& argv, const fs::path& config_path,
                  const fs::path& out_dir, int workers, std::optional<std::uint64_t> seed_override) {
  ToolConfig config = load_tool_config(config_path);
  if (!config.sweep) {
    throw ConfigError(config_path.string() + " has no 'sweep' section");
  }
  SweepPlan plan = *config.sweep;
  if (seed_override) {
    plan.base_seed.seed = *seed_override;
    config.sweep->base_seed.seed = *seed_override;
  }

  const SweepResult result = run_sweep(plan, workers);

  RunManifest manifest = make_manifest(argv, plan.base_seed, tool_config_to_json(config));
  manifest.parameters["out_dir"] = out_dir.string();

  SweepOutputFiles files;
  try {
    files = write_sweep_outputs(out_dir, result, manifest);
  } catch (...) {
    // Remove whatever this run managed to write; half-written tables are
    // worse than none.
    std::error_code ec;
    fs::remove(out_dir / kSweepManifestFile, ec);
    fs::remove(out_dir / kCombinedSweepFile, ec);
    const auto variants = static_cast<std::int32_t>(plan.config.variant_count());
    for (EstimatorKind kind : plan.estimators) {
      for (std::int32_t i = 0; i < variants; ++i) {
        for (std::int32_t j = i + 1; j < variants; ++j) {
          fs::remove(out_dir / curve_file_name(kind, i, j), ec);
        }
      }
    }
    throw;
  }

  std::cout << "wrote " << files.curves.size() << " curve files, " << files.combined.filename().string()
            << " and " << files.manifest.filename().string() << " to " << out_dir.string() << "\n";
  return kExitOk;
}

int run_report(const fs::path& sweep_dir, const fs::path& out_dir) {
  const fs::path combined = sweep_dir / kCombinedSweepFile;
  if (!fs::exists(combined)) {
    throw IoError("no " + std::string(kCombinedSweepFile) + " in " + sweep_dir.string() +
                  "; run `sharesim sweep` first");
  }
  const std::vector<CurvePoint> points = read_combined_sweep(combined);
  if (points.empty()) throw IoError("no rows in " + combined.string());

  const std::map<std::string, std::string> colors = {
      {"naive", "#d62728"},
      {"diff_in_qs", "#1f77b4"},
      {"diff_in_geometrics", "#2ca02c"},
  };

  // Group by pair, then by estimator, preserving first-seen order.
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  for (const CurvePoint& p : points) {
    const std::pair<std::int32_t, std::int32_t> key{p.variant_i, p.variant_j};
    bool seen = false;
    for (const auto& existing : pairs) seen = seen || existing == key;
    if (!seen) pairs.push_back(key);
  }

  fs::create_directories(out_dir);
  int written = 0;
  for (const auto& [i, j] : pairs) {
    std::vector<ChartSeries> series;
    for (const CurvePoint& p : points) {
      if (p.variant_i != i || p.variant_j != j) continue;
      ChartSeries* target = nullptr;
      for (ChartSeries& s : series) {
        if (s.label == p.estimator) target = &s;
      }
      if (target == nullptr) {
        const auto color = colors.find(p.estimator);
        series.push_back({p.estimator, color == colors.end() ? "#555555" : color->second, {}});
        target = &series.back();
      }
      target->points.push_back(p);
    }
    const std::string title =
        "ATE MSE vs sample size, variant " + std::to_string(i) + " vs " + std::to_string(j);
    const std::string svg = render_mse_chart_svg(title, series);
    const fs::path path = out_dir / ("mse_pair_" + std::to_string(i) + "_" + std::to_string(j) + ".svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "<!-- rendered from " << combined.string() << "; see " << kSweepManifestFile
        << " in the sweep directory -->\n"
        << svg;
    if (!out) throw IoError("failed while writing " + path.string());
    ++written;
  }
  std::cout << "wrote " << written << " charts to " << out_dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sharing-chain simulation and treatment-effect estimation toolkit"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::vector<std::string> argv_copy(argv, argv + argc);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "sample sharing chains into a session log");
  fs::path sim_config, sim_out;
  std::int64_t sim_n = 0;
  std::uint64_t sim_seed = 0, sim_stream = 0;
  simulate->add_option("--config", sim_config, "model config file")->required();
  simulate->add_option("--n", sim_n, "number of trajectories")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "simulation seed");
  simulate->add_option("--stream", sim_stream, "substream id");
  simulate->add_option("--out", sim_out, "session log to write")->required();

  // estimate
  auto* estimate = app.add_subcommand("estimate", "estimate treatment effects from a session log");
  fs::path est_log, est_config;
  std::vector<std::string> est_kinds;
  std::optional<fs::path> est_out;
  estimate->add_option("--log", est_log, "session log file")->required();
  estimate->add_option("--config", est_config, "config file holding the logging policy")->required();
  estimate->add_option("--estimator", est_kinds,
                       "estimators to run (naive, diff_in_qs, diff_in_geometrics); default all");
  estimate->add_option("--out", est_out, "CSV report path (stdout summary is always printed)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run the repeated-simulation MSE study");
  fs::path sweep_config, sweep_out;
  int sweep_workers = 0;
  std::optional<std::uint64_t> sweep_seed;
  sweep->add_option("--config", sweep_config, "config file with a sweep section")->required();
  sweep->add_option("--out", sweep_out, "output directory")->required();
  sweep->add_option("--workers", sweep_workers,
                    "worker threads (default: SHARESIM_WORKERS or hardware)");
  sweep->add_option("--seed", sweep_seed, "override the plan's base seed");

  // report
  auto* report = app.add_subcommand("report", "render MSE charts from sweep output");
  fs::path report_dir, report_out;
  report->add_option("--sweep-dir", report_dir, "directory written by `sweep`")->required();
  report->add_option("--out", report_out, "directory for the SVG charts")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(argv_copy, sim_config, sim_n, sim_seed, sim_stream, sim_out);
    if (*estimate) return run_estimate(argv_copy, est_log, est_config, est_kinds, est_out);
    if (*sweep) return run_sweep_cmd(argv_copy, sweep_config, sweep_out, sweep_workers, sweep_seed);
    if (*report) return run_report(report_dir, report_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DegenerateEstimateError& e) {
    std::cerr << "degenerate estimate: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const CapExceededError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const EmptyDatasetError& e) {
    std::cerr << "empty dataset: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
