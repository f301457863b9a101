#pragma once

#include <cstdint>
#include <optional>

#include "sharesim/rng.hpp"
#include "sharesim/types.hpp"

namespace sharesim {

// Depth-dependent perturbation of the continuation probabilities: at chain
// position t, variant a continues with clamp(gamma_a + depth_drift * t,
// 0, kDriftGammaCeiling). Zero drift leaves the model untouched. This is a
// test fixture for demonstrating estimator bias once continuation stops
// being position-independent; it is not a modeling feature.
struct MisspecificationKnob {
  double depth_drift = 0.0;

  friend bool operator==(const MisspecificationKnob&, const MisspecificationKnob&) = default;
};

// Upper clamp for drifted continuation probabilities. Keeps perturbed chains
// terminating (expected tail of 1000 sessions at the ceiling) instead of
// running into max_chain_length.
inline constexpr double kDriftGammaCeiling = 0.999;

// Assignment rule used while sampling: the production policy draws a fresh
// variant per session; a constant policy ships one variant to every session.
struct SamplingPolicy {
  static SamplingPolicy production() { return SamplingPolicy{}; }
  static SamplingPolicy constant(VariantId a) { return SamplingPolicy{a}; }

  bool is_constant() const { return constant_variant.has_value(); }

  std::optional<VariantId> constant_variant;
};

double effective_gamma(const SharingMdpConfig& config, const MisspecificationKnob& knob,
                       VariantId variant, std::int64_t position);

// Samples one chain into `out` (contents replaced, capacity reused). The
// substream is fully determined by (seed, trajectory_id). Throws
// CapExceededError if the chain would outgrow config.max_chain_length.
void sample_trajectory_into(Trajectory& out, const SharingMdpConfig& config,
                            const SamplingPolicy& policy, const MisspecificationKnob& knob,
                            SimulationSeed seed, std::int64_t trajectory_id);

Trajectory sample_trajectory(const SharingMdpConfig& config, const SamplingPolicy& policy,
                             const MisspecificationKnob& knob, SimulationSeed seed,
                             std::int64_t trajectory_id);

// Exactly n_trajectories chains with ids 0..n-1. Per-trajectory substreams
// make the output independent of evaluation order, so any internal or
// external parallelisation over ids reproduces the serial result.
Dataset sample_dataset(const SharingMdpConfig& config, const SamplingPolicy& policy,
                       const MisspecificationKnob& knob, SimulationSeed seed,
                       std::int64_t n_trajectories);

// Mean chain length over n constant-policy chains: a Monte Carlo estimate of
// the value of shipping `variant` to everyone, in sessions per seed session.
double monte_carlo_value(const SharingMdpConfig& config, VariantId variant,
                         std::int64_t n_trajectories, SimulationSeed seed);

}  // namespace sharesim
