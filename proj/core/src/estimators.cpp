#include "sharesim/estimators.hpp"

#include <stdexcept>
#include <string>

#include "sharesim/errors.hpp"
#include "sharesim/numeric.hpp"

namespace sharesim {

namespace {

void require_pair(const Dataset& dataset, VariantId i, VariantId j) {
  const auto n = static_cast<std::int32_t>(dataset.logging_policy.variant_count());
  if (i.index < 0 || i.index >= n || j.index < 0 || j.index >= n) {
    throw std::invalid_argument("variant index out of range");
  }
  if (i.index == j.index) {
    throw std::invalid_argument("i == j: a variant has no treatment effect against itself");
  }
  if (dataset.trajectories.empty()) throw EmptyDatasetError("dataset has no trajectories");
}

double require_positive_prob(const ProductionPolicy& policy, VariantId a) {
  const double p = policy.probs[static_cast<std::size_t>(a.index)];
  if (!(p > 0.0)) {
    throw ConfigError("logged policy assigns probability " + std::to_string(p) + " to variant " +
                      std::to_string(a.index));
  }
  return p;
}

// Mean of a per-trajectory statistic, using a balanced reduction so that
// duplicating the trajectory list leaves the result bit-identical.
template <typename Score>
double mean_over_trajectories(const Dataset& dataset, const Score& score) {
  const std::size_t n = dataset.trajectories.size();
  const double total =
      pairwise_sum(std::size_t{0}, n, [&](std::size_t k) { return score(dataset.trajectories[k]); });
  return total / static_cast<double>(n);
}

}  // namespace

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kNaive:
      return "naive";
    case EstimatorKind::kDiffInQs:
      return "diff_in_qs";
    case EstimatorKind::kDiffInGeometrics:
      return "diff_in_geometrics";
  }
  return "unknown";
}

std::optional<EstimatorKind> parse_estimator_kind(std::string_view name) {
  for (EstimatorKind kind : kAllEstimators) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

GammaEstimate estimate_gamma(const Dataset& dataset) {
  if (dataset.trajectories.empty()) throw EmptyDatasetError("dataset has no trajectories");
  const std::size_t variants = dataset.logging_policy.variant_count();
  const std::vector<SessionRecord> sessions = flatten(dataset);
  const auto total = static_cast<std::int64_t>(sessions.size());
  if (total == 0) throw EmptyDatasetError("dataset has no sessions");

  GammaEstimate out;
  out.total_sessions = total;
  out.gamma_hat.resize(variants);
  out.weight_sum.resize(variants);
  out.session_count.resize(variants, 0);

  for (const SessionRecord& s : sessions) {
    out.session_count[static_cast<std::size_t>(s.variant.index)] += 1;
  }
  for (std::size_t a = 0; a < variants; ++a) {
    const VariantId id{static_cast<std::int32_t>(a)};
    const double inv_p = 1.0 / require_positive_prob(dataset.logging_policy, id);
    const double reward_weight =
        pairwise_sum(std::size_t{0}, sessions.size(), [&](std::size_t k) {
          const SessionRecord& s = sessions[k];
          return s.variant == id ? inv_p * static_cast<double>(s.reward) : 0.0;
        });
    out.gamma_hat[a] = reward_weight / static_cast<double>(total);
    out.weight_sum[a] =
        static_cast<double>(out.session_count[a]) * inv_p;
  }
  return out;
}

double naive_trajectory_score(const Trajectory& trajectory, const ProductionPolicy& policy,
                              VariantId i, VariantId j) {
  const double wi = 1.0 / policy.probs[static_cast<std::size_t>(i.index)];
  const double wj = 1.0 / policy.probs[static_cast<std::size_t>(j.index)];
  double score = 0.0;
  for (const SessionRecord& s : trajectory.sessions) {
    if (s.reward == 0) continue;
    if (s.variant == i) score += wi;
    if (s.variant == j) score -= wj;
  }
  return score;
}

double diff_in_qs_trajectory_score(const Trajectory& trajectory, const ProductionPolicy& policy,
                                   VariantId i, VariantId j) {
  const double wi = 1.0 / policy.probs[static_cast<std::size_t>(i.index)];
  const double wj = 1.0 / policy.probs[static_cast<std::size_t>(j.index)];
  // Walk the chain back to front so tail holds the session's realized
  // downstream share count, sum of rewards at positions >= k. Rewards are
  // 0/1, so the tails are exact integers.
  double score = 0.0;
  std::int64_t tail = 0;
  for (std::size_t k = trajectory.sessions.size(); k-- > 0;) {
    const SessionRecord& s = trajectory.sessions[k];
    tail += s.reward;
    const double q = static_cast<double>(tail);
    if (s.variant == i) score += wi * q;
    if (s.variant == j) score -= wj * q;
  }
  return score;
}

double naive_ate(const Dataset& dataset, VariantId i, VariantId j) {
  require_pair(dataset, i, j);
  require_positive_prob(dataset.logging_policy, i);
  require_positive_prob(dataset.logging_policy, j);
  return mean_over_trajectories(dataset, [&](const Trajectory& t) {
    return naive_trajectory_score(t, dataset.logging_policy, i, j);
  });
}

double diff_in_qs_ate(const Dataset& dataset, VariantId i, VariantId j) {
  require_pair(dataset, i, j);
  require_positive_prob(dataset.logging_policy, i);
  require_positive_prob(dataset.logging_policy, j);
  return mean_over_trajectories(dataset, [&](const Trajectory& t) {
    return diff_in_qs_trajectory_score(t, dataset.logging_policy, i, j);
  });
}

namespace {

double geometric_value_or_throw(const GammaEstimate& gamma, VariantId a) {
  const double g = gamma.gamma_hat[static_cast<std::size_t>(a.index)];
  if (g >= 1.0 - kGammaDegeneracyEpsilon) {
    throw DegenerateEstimateError("gamma_hat for variant " + std::to_string(a.index) + " is " +
                                      std::to_string(g) +
                                      " (>= 1 - 1e-9); the geometric value diverges",
                                  a.index);
  }
  return 1.0 / (1.0 - g);
}

}  // namespace

double diff_in_geometrics_ate(const GammaEstimate& gamma, VariantId i, VariantId j) {
  const auto n = static_cast<std::int32_t>(gamma.gamma_hat.size());
  if (i.index < 0 || i.index >= n || j.index < 0 || j.index >= n) {
    throw std::invalid_argument("variant index out of range");
  }
  if (i.index == j.index) {
    throw std::invalid_argument("i == j: a variant has no treatment effect against itself");
  }
  return geometric_value_or_throw(gamma, i) - geometric_value_or_throw(gamma, j);
}

std::vector<PairEstimate> estimate_all_pairs(const Dataset& dataset, EstimatorKind kind) {
  if (dataset.trajectories.empty()) throw EmptyDatasetError("dataset has no trajectories");
  const auto variants = static_cast<std::int32_t>(dataset.logging_policy.variant_count());
  if (variants < 2) throw ConfigError("need at least 2 variants for pairwise effects");

  std::optional<GammaEstimate> gamma;
  if (kind == EstimatorKind::kDiffInGeometrics) gamma = estimate_gamma(dataset);

  std::vector<PairEstimate> out;
  out.reserve(static_cast<std::size_t>(variants) * (variants - 1) / 2);
  for (std::int32_t i = 0; i < variants; ++i) {
    for (std::int32_t j = i + 1; j < variants; ++j) {
      PairEstimate pe;
      pe.variant_i = i;
      pe.variant_j = j;
      switch (kind) {
        case EstimatorKind::kNaive:
          pe.value = naive_ate(dataset, VariantId{i}, VariantId{j});
          break;
        case EstimatorKind::kDiffInQs:
          pe.value = diff_in_qs_ate(dataset, VariantId{i}, VariantId{j});
          break;
        case EstimatorKind::kDiffInGeometrics:
          try {
            pe.value = diff_in_geometrics_ate(*gamma, VariantId{i}, VariantId{j});
          } catch (const DegenerateEstimateError&) {
            pe.degenerate = true;
            pe.value = 0.0;
          }
          break;
      }
      out.push_back(pe);
    }
  }
  return out;
}

AteMatrix pairwise_ates(const Dataset& dataset, EstimatorKind kind) {
  if (dataset.trajectories.empty()) throw EmptyDatasetError("dataset has no trajectories");
  const auto variants = static_cast<std::int32_t>(dataset.logging_policy.variant_count());
  if (variants < 2) throw ConfigError("need at least 2 variants for pairwise effects");

  std::optional<GammaEstimate> gamma;
  if (kind == EstimatorKind::kDiffInGeometrics) gamma = estimate_gamma(dataset);

  return AteMatrix::from_upper_triangle(static_cast<std::size_t>(variants), [&](int i, int j) {
    const VariantId vi{i};
    const VariantId vj{j};
    switch (kind) {
      case EstimatorKind::kNaive:
        return naive_ate(dataset, vi, vj);
      case EstimatorKind::kDiffInQs:
        return diff_in_qs_ate(dataset, vi, vj);
      case EstimatorKind::kDiffInGeometrics:
        try {
          return diff_in_geometrics_ate(*gamma, vi, vj);
        } catch (const DegenerateEstimateError& e) {
          throw DegenerateEstimateError("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                            "): " + e.what(),
                                        e.variant());
        }
    }
    throw std::logic_error("unreachable estimator kind");
  });
}

}  // namespace sharesim
