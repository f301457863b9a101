#pragma once

#include <cstdint>
#include <vector>

#include "sharesim/rng.hpp"
#include "sharesim/types.hpp"

namespace sharesim::oracle {

// Closed-form policy value 1/(1 - gamma): expected sessions per seed session
// when every session continues with probability gamma. Domain [0, 1).
double true_value(double gamma);

// Partial sum over chain lengths, sum_{k<=k_max} k gamma^(k-1) (1 - gamma).
// Converges to true_value from below; the tail after k_max is bounded by
// (k_max + 2) * gamma^k_max / (1 - gamma).
double truncated_series_value(double gamma, std::int64_t k_max);

inline constexpr std::int64_t kDefaultSeriesTerms = 10'000;

// Pairwise ground truth for a validated config.
AteMatrix true_ate_matrix(const SharingMdpConfig& config);

// Marginal per-session continuation probability under the production policy.
double mean_gamma(const SharingMdpConfig& config);

// Large-sample limits of the naive and tail-sum estimators when continuation
// depends only on the session's own variant (zero drift). Derivation sketch:
// a chain survives past position t with marginal probability gbar^t, a
// session's weighted reward has conditional mean gamma_i - gamma_j, and a
// session's weighted tail sum has conditional mean (gamma_i - gamma_j) /
// (1 - gbar); summing the geometric occupancy series gives the results
// below. These are derived here, not established elsewhere, so
// validate_asymptotes must confirm them against a brute-force Monte Carlo
// run before any test uses them as oracles.
double naive_asymptote(const SharingMdpConfig& config, VariantId i, VariantId j);     // (gi-gj)/(1-gbar)
double diff_in_qs_asymptote(const SharingMdpConfig& config, VariantId i, VariantId j);  // (gi-gj)/(1-gbar)^2

struct AsymptoteCheck {
  std::int32_t variant_i = 0;
  std::int32_t variant_j = 0;
  double formula = 0.0;       // analytic limit above
  double monte_carlo = 0.0;   // brute-force estimate of the same limit
  double standard_error = 0.0;
  bool consistent = false;    // |monte_carlo - formula| <= 5 se + 1e-4

  // What downstream tests should compare against: the formula when the
  // brute-force run confirms it, the brute-force value otherwise.
  double target() const { return consistent ? formula : monte_carlo; }
};

struct AsymptoteValidation {
  std::vector<AsymptoteCheck> naive;       // upper-triangle pairs, (i, j) with i < j
  std::vector<AsymptoteCheck> diff_in_qs;  // same order

  bool all_consistent() const;
};

// Runs both estimators over n freshly simulated chains (no dataset is
// materialized) and checks every pair's asymptote formula. n should be at
// least 10^7 for the checks to be sharp.
AsymptoteValidation validate_asymptotes(const SharingMdpConfig& config,
                                        std::int64_t n_trajectories, SimulationSeed seed);

}  // namespace sharesim::oracle
