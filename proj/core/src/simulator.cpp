#include "sharesim/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <string>

#include "sharesim/errors.hpp"

namespace sharesim {

namespace {

// Inverse-CDF draw over the policy's assignment probabilities.
VariantId draw_variant(rng::SplitMix64& gen, const ProductionPolicy& policy) {
  const double u = gen.next_unit();
  double acc = 0.0;
  const auto n = static_cast<std::int32_t>(policy.probs.size());
  for (std::int32_t a = 0; a + 1 < n; ++a) {
    acc += policy.probs[a];
    if (u < acc) return VariantId{a};
  }
  return VariantId{n - 1};
}

}  // namespace

double effective_gamma(const SharingMdpConfig& config, const MisspecificationKnob& knob,
                       VariantId variant, std::int64_t position) {
  const double base = config.gammas[static_cast<std::size_t>(variant.index)];
  if (knob.depth_drift == 0.0) return base;
  const double drifted = base + knob.depth_drift * static_cast<double>(position);
  return std::clamp(drifted, 0.0, kDriftGammaCeiling);
}

void sample_trajectory_into(Trajectory& out, const SharingMdpConfig& config,
                            const SamplingPolicy& policy, const MisspecificationKnob& knob,
                            SimulationSeed seed, std::int64_t trajectory_id) {
  out.sessions.clear();
  rng::SplitMix64 gen = rng::trajectory_stream(seed, static_cast<std::uint64_t>(trajectory_id));
  for (std::int64_t t = 0;; ++t) {
    const VariantId a =
        policy.is_constant() ? *policy.constant_variant : draw_variant(gen, config.policy);
    assert(a.index >= 0 && static_cast<std::size_t>(a.index) < config.variant_count());
    const double gamma = effective_gamma(config, knob, a, t);
    const bool continues = gen.next_unit() < gamma;
    out.sessions.push_back(SessionRecord{trajectory_id, static_cast<std::int32_t>(t), a,
                                         continues ? 1 : 0});
    if (!continues) return;
    if (t + 1 >= config.max_chain_length) {
      throw CapExceededError("chain " + std::to_string(trajectory_id) + " reached max_chain_length " +
                             std::to_string(config.max_chain_length) +
                             " without terminating; continuation probabilities are too close to 1 for the cap");
    }
  }
}

Trajectory sample_trajectory(const SharingMdpConfig& config, const SamplingPolicy& policy,
                             const MisspecificationKnob& knob, SimulationSeed seed,
                             std::int64_t trajectory_id) {
  Trajectory t;
  sample_trajectory_into(t, config, policy, knob, seed, trajectory_id);
  return t;
}

Dataset sample_dataset(const SharingMdpConfig& config, const SamplingPolicy& policy,
                       const MisspecificationKnob& knob, SimulationSeed seed,
                       std::int64_t n_trajectories) {
  if (n_trajectories < 1) throw ConfigError("n_trajectories must be >= 1");
  Dataset out;
  out.logging_policy = config.policy;
  out.trajectories.resize(static_cast<std::size_t>(n_trajectories));
  for (std::int64_t id = 0; id < n_trajectories; ++id) {
    sample_trajectory_into(out.trajectories[static_cast<std::size_t>(id)], config, policy, knob,
                           seed, id);
  }
  return out;
}

double monte_carlo_value(const SharingMdpConfig& config, VariantId variant,
                         std::int64_t n_trajectories, SimulationSeed seed) {
  if (n_trajectories < 1) throw ConfigError("n_trajectories must be >= 1");
  const SamplingPolicy policy = SamplingPolicy::constant(variant);
  const MisspecificationKnob no_drift{};
  Trajectory scratch;
  std::int64_t total_sessions = 0;  // exact; lengths are integers
  for (std::int64_t id = 0; id < n_trajectories; ++id) {
    sample_trajectory_into(scratch, config, policy, no_drift, seed, id);
    total_sessions += scratch.length();
  }
  return static_cast<double>(total_sessions) / static_cast<double>(n_trajectories);
}

}  // namespace sharesim
