#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sharesim/estimators.hpp"
#include "sharesim/rng.hpp"
#include "sharesim/simulator.hpp"
#include "sharesim/types.hpp"

namespace sharesim {

// One repeated-simulation study: for every repetition and sample size,
// simulate a fresh production-policy dataset and score every estimator on
// every variant pair against the closed-form truth.
struct SweepPlan {
  SharingMdpConfig config;
  MisspecificationKnob knob;
  std::vector<std::int64_t> sample_sizes;  // strictly increasing, all >= 10
  std::int32_t repetitions = 32;           // >= 2, the CI needs a variance
  SimulationSeed base_seed;
  std::vector<EstimatorKind> estimators{kAllEstimators.begin(), kAllEstimators.end()};
};

// Throws ConfigError on any violated plan invariant.
void validate_plan(const SweepPlan& plan);

struct ConfidenceInterval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Normal-approximation 95% interval on the mean: mean +/- 1.96 * sd / sqrt(R),
// with the lower bound clamped at 0. Intended for nonnegative quantities
// (squared errors); requires at least 2 values.
ConfidenceInterval ci95(std::span<const double> values);

// Aggregate for one (estimator, pair, sample size) cell.
struct SweepCell {
  EstimatorKind estimator = EstimatorKind::kNaive;
  std::int32_t variant_i = 0;
  std::int32_t variant_j = 0;
  std::int64_t sample_size = 0;
  std::vector<double> squared_errors;  // one per successful repetition, in repetition order
  std::int32_t failure_count = 0;      // repetitions lost to degenerate estimates
  double mse = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct SweepResult {
  SweepPlan plan;
  AteMatrix truth;
  std::vector<SweepCell> cells;  // estimator-major, then pair (i < j), then sample size

  const SweepCell* find(EstimatorKind kind, std::int32_t i, std::int32_t j,
                        std::int64_t sample_size) const;
};

// Number of workers used when a caller passes workers <= 0: the
// SHARESIM_WORKERS environment variable if set, hardware concurrency
// otherwise.
int default_worker_count();

// Runs the plan. Repetition r at sample size n draws its dataset from
// substream(base_seed, r, n), so every cell is independent of every other
// and the result is identical for any worker count. Cells with fewer than 2
// surviving repetitions report NaN aggregates.
SweepResult run_sweep(const SweepPlan& plan, int workers = 0);

}  // namespace sharesim
