#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sharesim/experiment.hpp"
#include "sharesim/manifest.hpp"

namespace sharesim {

// One row of a sweep table: the MSE of an estimator on one pair at one
// sample size, with its 95% interval and the count of repetitions lost to
// degenerate estimates.
struct CurvePoint {
  std::string estimator;
  std::int32_t variant_i = 0;
  std::int32_t variant_j = 0;
  std::int64_t sample_size = 0;
  double mse = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int32_t failures = 0;
};

inline constexpr const char* kCombinedSweepFile = "mse_combined.csv";
inline constexpr const char* kSweepManifestFile = "manifest.json";

std::string curve_file_name(EstimatorKind kind, std::int32_t i, std::int32_t j);

struct SweepOutputFiles {
  std::vector<std::filesystem::path> curves;
  std::filesystem::path combined;
  std::filesystem::path manifest;
};

// Writes one CSV per (estimator, pair) plus the combined table and the run
// manifest into out_dir (created if missing). The data files are a pure
// function of the SweepResult; all run-specific context lives in the
// manifest file.
SweepOutputFiles write_sweep_outputs(const std::filesystem::path& out_dir,
                                     const SweepResult& result, const RunManifest& manifest);

// Reads the combined table back; used by the report renderer.
std::vector<CurvePoint> read_combined_sweep(const std::filesystem::path& combined_csv);

}  // namespace sharesim
