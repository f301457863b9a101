#include "sharesim/oracle.hpp"

#include <cmath>
#include <string>

#include "sharesim/errors.hpp"
#include "sharesim/estimators.hpp"
#include "sharesim/numeric.hpp"
#include "sharesim/simulator.hpp"

namespace sharesim::oracle {

namespace {

void require_gamma_domain(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw ConfigError("gamma is " + std::to_string(gamma) + "; the geometric value needs [0, 1)");
  }
}

}  // namespace

double true_value(double gamma) {
  require_gamma_domain(gamma);
  return 1.0 / (1.0 - gamma);
}

double truncated_series_value(double gamma, std::int64_t k_max) {
  require_gamma_domain(gamma);
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  // k = 0 contributes nothing; start the running power at gamma^0 for k = 1.
  CompensatedSum sum;
  double power = 1.0;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    sum.add(static_cast<double>(k) * power * (1.0 - gamma));
    power *= gamma;
  }
  return sum.value();
}

AteMatrix true_ate_matrix(const SharingMdpConfig& config) {
  const SharingMdpConfig validated = validate_config(config);
  return AteMatrix::from_upper_triangle(validated.variant_count(), [&](int i, int j) {
    return true_value(validated.gammas[static_cast<std::size_t>(i)]) -
           true_value(validated.gammas[static_cast<std::size_t>(j)]);
  });
}

double mean_gamma(const SharingMdpConfig& config) {
  double acc = 0.0;
  for (std::size_t a = 0; a < config.variant_count(); ++a) {
    acc += config.policy.probs[a] * config.gammas[a];
  }
  return acc;
}

double naive_asymptote(const SharingMdpConfig& config, VariantId i, VariantId j) {
  const double gi = config.gammas[static_cast<std::size_t>(i.index)];
  const double gj = config.gammas[static_cast<std::size_t>(j.index)];
  return (gi - gj) / (1.0 - mean_gamma(config));
}

double diff_in_qs_asymptote(const SharingMdpConfig& config, VariantId i, VariantId j) {
  const double gi = config.gammas[static_cast<std::size_t>(i.index)];
  const double gj = config.gammas[static_cast<std::size_t>(j.index)];
  const double denom = 1.0 - mean_gamma(config);
  return (gi - gj) / (denom * denom);
}

bool AsymptoteValidation::all_consistent() const {
  for (const AsymptoteCheck& c : naive) {
    if (!c.consistent) return false;
  }
  for (const AsymptoteCheck& c : diff_in_qs) {
    if (!c.consistent) return false;
  }
  return true;
}

AsymptoteValidation validate_asymptotes(const SharingMdpConfig& config,
                                        std::int64_t n_trajectories, SimulationSeed seed) {
  const SharingMdpConfig cfg = validate_config(config);
  if (n_trajectories < 2) throw ConfigError("n_trajectories must be >= 2");

  struct PairIndex {
    VariantId i, j;
  };
  std::vector<PairIndex> pairs;
  const auto variants = static_cast<std::int32_t>(cfg.variant_count());
  for (std::int32_t i = 0; i < variants; ++i) {
    for (std::int32_t j = i + 1; j < variants; ++j) {
      pairs.push_back({VariantId{i}, VariantId{j}});
    }
  }

  // One pass; per-pair streaming moments of both trajectory scores.
  std::vector<CompensatedSum> naive_sum(pairs.size()), naive_sq(pairs.size());
  std::vector<CompensatedSum> qs_sum(pairs.size()), qs_sq(pairs.size());
  const SamplingPolicy production = SamplingPolicy::production();
  const MisspecificationKnob no_drift{};
  Trajectory scratch;
  for (std::int64_t id = 0; id < n_trajectories; ++id) {
    sample_trajectory_into(scratch, cfg, production, no_drift, seed, id);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double ns = naive_trajectory_score(scratch, cfg.policy, pairs[p].i, pairs[p].j);
      const double qs = diff_in_qs_trajectory_score(scratch, cfg.policy, pairs[p].i, pairs[p].j);
      naive_sum[p].add(ns);
      naive_sq[p].add(ns * ns);
      qs_sum[p].add(qs);
      qs_sq[p].add(qs * qs);
    }
  }

  const auto n = static_cast<double>(n_trajectories);
  auto finish = [&](const CompensatedSum& sum, const CompensatedSum& sq, double formula,
                    const PairIndex& pair) {
    AsymptoteCheck check;
    check.variant_i = pair.i.index;
    check.variant_j = pair.j.index;
    check.formula = formula;
    check.monte_carlo = sum.value() / n;
    const double variance =
        std::max(0.0, sq.value() / n - check.monte_carlo * check.monte_carlo);
    check.standard_error = std::sqrt(variance / n);
    check.consistent =
        std::abs(check.monte_carlo - check.formula) <= 5.0 * check.standard_error + 1e-4;
    return check;
  };

  AsymptoteValidation out;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out.naive.push_back(finish(naive_sum[p], naive_sq[p],
                               naive_asymptote(cfg, pairs[p].i, pairs[p].j), pairs[p]));
    out.diff_in_qs.push_back(finish(qs_sum[p], qs_sq[p],
                                    diff_in_qs_asymptote(cfg, pairs[p].i, pairs[p].j), pairs[p]));
  }
  return out;
}

}  // namespace sharesim::oracle
