#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sharesim/types.hpp"

namespace sharesim {

enum class EstimatorKind {
  kNaive,             // per-session IPS on raw rewards
  kDiffInQs,          // per-session IPS on realized downstream tail sums
  kDiffInGeometrics,  // geometric closed form on IPS continuation estimates
};

inline constexpr std::array<EstimatorKind, 3> kAllEstimators = {
    EstimatorKind::kNaive, EstimatorKind::kDiffInQs, EstimatorKind::kDiffInGeometrics};

const char* to_string(EstimatorKind kind);
std::optional<EstimatorKind> parse_estimator_kind(std::string_view name);

// Per-variant IPS estimate of the session continuation probability, plus
// diagnostics. gamma_hat is always >= 0 but can exceed 1 in small samples;
// anything plugging it into 1/(1 - gamma_hat) must handle that explicitly.
struct GammaEstimate {
  std::vector<double> gamma_hat;
  std::vector<double> weight_sum;           // per-variant sum of 1/pi(a)
  std::vector<std::int64_t> session_count;  // raw per-variant session counts
  std::int64_t total_sessions = 0;
};

// Degeneracy threshold for the geometric closed form: gamma_hat must stay
// below 1 - kGammaDegeneracyEpsilon.
inline constexpr double kGammaDegeneracyEpsilon = 1e-9;

// gamma_hat[a] = (1/|D|) * sum over sessions of 1(variant == a) / pi(a) * r,
// where |D| is the flattened session count. Unbiased for the per-session
// share rate under the logged policy.
GammaEstimate estimate_gamma(const Dataset& dataset);

// Contribution of one chain to the naive estimator: the IPS-weighted sum of
// raw session rewards, sum_t [1(a_t=i)/pi(i) - 1(a_t=j)/pi(j)] * r_t.
double naive_trajectory_score(const Trajectory& trajectory, const ProductionPolicy& policy,
                              VariantId i, VariantId j);

// Same weighting applied to each session's realized downstream share count
// (the tail sum of rewards within its own chain) instead of its raw reward.
double diff_in_qs_trajectory_score(const Trajectory& trajectory, const ProductionPolicy& policy,
                                   VariantId i, VariantId j);

// Trajectory scores averaged over chains, so the estimates are per seed
// session and comparable with the closed-form truth.
double naive_ate(const Dataset& dataset, VariantId i, VariantId j);
double diff_in_qs_ate(const Dataset& dataset, VariantId i, VariantId j);

// 1/(1 - gamma_hat_i) - 1/(1 - gamma_hat_j). Throws DegenerateEstimateError
// if either estimate is >= 1 - kGammaDegeneracyEpsilon.
double diff_in_geometrics_ate(const GammaEstimate& gamma, VariantId i, VariantId j);

// One unordered pair's estimate, or its degeneracy flag.
struct PairEstimate {
  std::int32_t variant_i = 0;
  std::int32_t variant_j = 0;
  double value = 0.0;
  bool degenerate = false;
};

// Upper-triangle estimates (i < j) with per-pair degeneracy flags instead of
// exceptions; callers such as the sweep harness count flagged pairs as
// failed repetitions.
std::vector<PairEstimate> estimate_all_pairs(const Dataset& dataset, EstimatorKind kind);

// Full antisymmetric matrix. Throws DegenerateEstimateError naming the first
// degenerate pair.
AteMatrix pairwise_ates(const Dataset& dataset, EstimatorKind kind);

}  // namespace sharesim
