#include "sharesim/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "sharesim/errors.hpp"
#include "sharesim/numeric.hpp"
#include "sharesim/oracle.hpp"

namespace sharesim {

void validate_plan(const SweepPlan& plan) {
  validate_config(plan.config);
  if (plan.sample_sizes.empty()) throw ConfigError("sweep plan has no sample sizes");
  std::int64_t previous = 0;
  for (std::int64_t n : plan.sample_sizes) {
    if (n < 10) throw ConfigError("sample sizes must all be >= 10");
    if (n <= previous) throw ConfigError("sample sizes must be strictly increasing");
    previous = n;
  }
  if (plan.repetitions < 2) {
    throw ConfigError("repetitions must be >= 2; the confidence interval needs a variance estimate");
  }
  if (plan.estimators.empty()) throw ConfigError("sweep plan selects no estimators");
}

ConfidenceInterval ci95(std::span<const double> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("ci95 needs at least 2 values");
  }
  const MeanSd ms = mean_and_sample_sd(values);
  const double half = 1.96 * ms.sd / std::sqrt(static_cast<double>(values.size()));
  ConfidenceInterval ci;
  ci.mean = ms.mean;
  ci.low = std::max(0.0, ms.mean - half);
  ci.high = ms.mean + half;
  return ci;
}

int default_worker_count() {
  if (const char* env = std::getenv("SHARESIM_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

const SweepCell* SweepResult::find(EstimatorKind kind, std::int32_t i, std::int32_t j,
                                   std::int64_t sample_size) const {
  for (const SweepCell& cell : cells) {
    if (cell.estimator == kind && cell.variant_i == i && cell.variant_j == j &&
        cell.sample_size == sample_size) {
      return &cell;
    }
  }
  return nullptr;
}

namespace {

// Per-repetition outcome for every estimator and pair of one (r, n) unit.
struct UnitOutcome {
  std::vector<std::vector<PairEstimate>> per_estimator;  // [estimator][pair]
};

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, int workers) {
  validate_plan(plan);
  if (workers <= 0) workers = default_worker_count();

  SweepResult result;
  result.plan = plan;
  result.truth = oracle::true_ate_matrix(plan.config);

  const auto variants = static_cast<std::int32_t>(plan.config.variant_count());
  const std::size_t n_sizes = plan.sample_sizes.size();
  const auto reps = static_cast<std::size_t>(plan.repetitions);

  // Work units are (repetition, sample size) cells; each simulates its own
  // dataset and is written to a preallocated slot, so scheduling order never
  // shows in the output.
  std::vector<UnitOutcome> outcomes(reps * n_sizes);
  std::atomic<std::size_t> next_unit{0};
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  auto worker_loop = [&]() {
    for (;;) {
      const std::size_t unit = next_unit.fetch_add(1);
      if (unit >= outcomes.size()) return;
      if (failed.load()) return;
      const std::size_t rep = unit / n_sizes;
      const std::size_t size_index = unit % n_sizes;
      const std::int64_t n = plan.sample_sizes[size_index];
      try {
        const SimulationSeed cell_seed =
            rng::substream(plan.base_seed, static_cast<std::uint64_t>(rep),
                           static_cast<std::uint64_t>(n));
        const Dataset dataset = sample_dataset(plan.config, SamplingPolicy::production(),
                                               plan.knob, cell_seed, n);
        UnitOutcome& slot = outcomes[unit];
        slot.per_estimator.reserve(plan.estimators.size());
        for (EstimatorKind kind : plan.estimators) {
          slot.per_estimator.push_back(estimate_all_pairs(dataset, kind));
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  if (workers == 1) {
    worker_loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Aggregate in a fixed order: estimator, pair, sample size, repetition.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t e = 0; e < plan.estimators.size(); ++e) {
    std::size_t pair_index = 0;
    for (std::int32_t i = 0; i < variants; ++i) {
      for (std::int32_t j = i + 1; j < variants; ++j, ++pair_index) {
        for (std::size_t s = 0; s < n_sizes; ++s) {
          SweepCell cell;
          cell.estimator = plan.estimators[e];
          cell.variant_i = i;
          cell.variant_j = j;
          cell.sample_size = plan.sample_sizes[s];
          const double truth = result.truth.at(i, j);
          for (std::size_t rep = 0; rep < reps; ++rep) {
            const PairEstimate& pe = outcomes[rep * n_sizes + s].per_estimator[e][pair_index];
            if (pe.degenerate) {
              cell.failure_count += 1;
              continue;
            }
            const double err = pe.value - truth;
            cell.squared_errors.push_back(err * err);
          }
          if (cell.squared_errors.size() >= 2) {
            const ConfidenceInterval ci = ci95(cell.squared_errors);
            cell.mse = ci.mean;
            cell.ci_low = ci.low;
            cell.ci_high = ci.high;
          } else {
            cell.mse = nan;
            cell.ci_low = nan;
            cell.ci_high = nan;
          }
          result.cells.push_back(std::move(cell));
        }
      }
    }
  }
  return result;
}

}  // namespace sharesim
