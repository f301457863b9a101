#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace sharesim {

// Index of a system variant (one arm of the experiment).
struct VariantId {
  std::int32_t index = 0;

  friend bool operator==(const VariantId&, const VariantId&) = default;
};

// Stochastic assignment of variants to incoming sessions. Every entry must be
// strictly positive (entries are inverse-propensity denominators) and the
// entries must sum to 1 within kPolicySumTolerance.
struct ProductionPolicy {
  std::vector<double> probs;

  std::size_t variant_count() const { return probs.size(); }

  friend bool operator==(const ProductionPolicy&, const ProductionPolicy&) = default;
};

inline constexpr double kPolicySumTolerance = 1e-12;
inline constexpr std::int64_t kDefaultMaxChainLength = 1'000'000;

// Generative model of sharing chains: a session assigned variant a spawns a
// follow-up session with probability gammas[a]. Each gamma must lie in
// [0, 1); the closed-form value 1/(1 - gamma) diverges at 1.
struct SharingMdpConfig {
  ProductionPolicy policy;
  std::vector<double> gammas;
  std::int64_t max_chain_length = kDefaultMaxChainLength;

  std::size_t variant_count() const { return gammas.size(); }

  friend bool operator==(const SharingMdpConfig&, const SharingMdpConfig&) = default;
};

// One user session. reward is 1 iff the session's share succeeded, i.e. the
// chain continued past this session.
struct SessionRecord {
  std::int64_t trajectory_id = 0;
  std::int32_t position = 0;
  VariantId variant;
  std::int32_t reward = 0;

  friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

// One sharing chain: positions 0,1,2,... and reward 1 everywhere except the
// final session, whose failed share ended the chain. A chain of length L
// therefore has reward sum L - 1.
struct Trajectory {
  std::vector<SessionRecord> sessions;

  std::int64_t length() const { return static_cast<std::int64_t>(sessions.size()); }

  std::int64_t reward_sum() const {
    std::int64_t total = 0;
    for (const SessionRecord& s : sessions) total += s.reward;
    return total;
  }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Sessions logged under one policy, grouped into chains. logging_policy is
// the production policy in force when the data was generated; estimators use
// it for their propensity weights and never re-estimate it from data.
struct Dataset {
  std::vector<Trajectory> trajectories;
  ProductionPolicy logging_policy;

  std::int64_t session_count() const {
    std::int64_t total = 0;
    for (const Trajectory& t : trajectories) total += t.length();
    return total;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Ordered-pair treatment effects: entry (i, j) holds V(i) - V(j), in expected
// sessions per seed session. Mirror entries are written together, so the
// diagonal is exactly zero and values[i][j] == -values[j][i] exactly.
class AteMatrix {
 public:
  AteMatrix() = default;
  explicit AteMatrix(std::size_t variant_count)
      : n_(variant_count), values_(variant_count * variant_count, 0.0) {}

  // value(i, j) is called once per unordered pair with i < j.
  static AteMatrix from_upper_triangle(std::size_t variant_count,
                                       const std::function<double(int, int)>& value);

  std::size_t variant_count() const { return n_; }

  double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * n_ + j]; }

  // Sets (i, j) and its mirror; i != j required.
  void set_pair(int i, int j, double value_ij);

  friend bool operator==(const AteMatrix&, const AteMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Returns the config unchanged iff every invariant holds; throws ConfigError
// naming the first violated invariant otherwise.
SharingMdpConfig validate_config(SharingMdpConfig config);

// Throws Error if `t` is not a well-formed chain (consecutive positions, one
// trajectory id, rewards 1..1,0, length within cap).
void validate_trajectory(const Trajectory& t, std::int64_t max_chain_length);

// All sessions in trajectory order, then position order. The flattened size
// is the |D| used by the gamma estimator.
std::vector<SessionRecord> flatten(const Dataset& dataset);

}  // namespace sharesim
