#include "sharesim/types.hpp"

#include <cmath>
#include <string>

#include "sharesim/errors.hpp"

namespace sharesim {

AteMatrix AteMatrix::from_upper_triangle(std::size_t variant_count,
                                         const std::function<double(int, int)>& value) {
  AteMatrix m(variant_count);
  for (int i = 0; i < static_cast<int>(variant_count); ++i) {
    for (int j = i + 1; j < static_cast<int>(variant_count); ++j) {
      m.set_pair(i, j, value(i, j));
    }
  }
  return m;
}

void AteMatrix::set_pair(int i, int j, double value_ij) {
  if (i == j) throw Error("AteMatrix::set_pair: i == j (diagonal is fixed at 0)");
  values_[static_cast<std::size_t>(i) * n_ + j] = value_ij;
  values_[static_cast<std::size_t>(j) * n_ + i] = -value_ij;
}

SharingMdpConfig validate_config(SharingMdpConfig config) {
  const std::size_t n = config.gammas.size();
  if (config.policy.probs.size() != n) {
    throw ConfigError("policy has " + std::to_string(config.policy.probs.size()) +
                      " entries but there are " + std::to_string(n) + " continuation probabilities");
  }
  if (n < 2) {
    throw ConfigError("fewer than 2 variants: a single-variant experiment has no treatment effect to estimate");
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const double p = config.policy.probs[a];
    if (!(p > 0.0)) {
      throw ConfigError("variant " + std::to_string(a) +
                        " has assignment probability " + std::to_string(p) +
                        "; probabilities must be strictly positive");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kPolicySumTolerance) {
    throw ConfigError("assignment probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
  for (std::size_t a = 0; a < n; ++a) {
    const double g = config.gammas[a];
    if (!(g >= 0.0 && g < 1.0)) {
      throw ConfigError("continuation probability for variant " + std::to_string(a) +
                        " is " + std::to_string(g) + "; it must lie in [0, 1)");
    }
  }
  if (config.max_chain_length < 1) {
    throw ConfigError("max_chain_length must be >= 1");
  }
  return config;
}

void validate_trajectory(const Trajectory& t, std::int64_t max_chain_length) {
  if (t.sessions.empty()) throw Error("trajectory is empty");
  if (t.length() > max_chain_length) {
    throw Error("trajectory length " + std::to_string(t.length()) + " exceeds cap " +
                std::to_string(max_chain_length));
  }
  const std::int64_t id = t.sessions.front().trajectory_id;
  for (std::size_t k = 0; k < t.sessions.size(); ++k) {
    const SessionRecord& s = t.sessions[k];
    if (s.trajectory_id != id) throw Error("trajectory mixes ids");
    if (s.position != static_cast<std::int32_t>(k)) {
      throw Error("positions are not consecutive from 0");
    }
    const bool terminal = (k + 1 == t.sessions.size());
    if (s.reward != (terminal ? 0 : 1)) {
      throw Error("rewards must be 1 for every session except a terminal 0");
    }
  }
}

std::vector<SessionRecord> flatten(const Dataset& dataset) {
  std::vector<SessionRecord> out;
  out.reserve(static_cast<std::size_t>(dataset.session_count()));
  for (const Trajectory& t : dataset.trajectories) {
    out.insert(out.end(), t.sessions.begin(), t.sessions.end());
  }
  return out;
}

}  // namespace sharesim
