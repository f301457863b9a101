#pragma once

#include <cstdint>

namespace sharesim {

// Identifies one reproducible random stream. Equal (seed, stream_id) pairs
// produce identical simulation output on every platform and at any worker
// count.
struct SimulationSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SimulationSeed&, const SimulationSeed&) = default;
};

namespace rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output function (Steele, Lea & Flood).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds one value into a stream key. Substream keys are derived by absorbing,
// in a fixed order, the quantities that identify a unit of work. This chain
// is part of the reproducibility contract and is pinned by golden tests.
constexpr std::uint64_t absorb(std::uint64_t key, std::uint64_t value) {
  return mix64(key + kGolden + value);
}

// Counter-based generator over pure 64-bit integer arithmetic; output is
// identical on every platform. State is two words, so per-trajectory
// substreams are cheap.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  constexpr std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits; avoids the platform-dependent
  // std::uniform_real_distribution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t trajectory_key(SimulationSeed s, std::uint64_t trajectory_id) {
  return absorb(absorb(absorb(0, s.seed), s.stream_id), trajectory_id);
}

inline SplitMix64 trajectory_stream(SimulationSeed s, std::uint64_t trajectory_id) {
  return SplitMix64(trajectory_key(s, trajectory_id));
}

// Child seed for an independent unit of work, e.g. one (repetition, sample
// size) cell of a sweep. Distinct (a, b) pairs give independent streams.
constexpr SimulationSeed substream(SimulationSeed s, std::uint64_t a, std::uint64_t b) {
  return SimulationSeed{s.seed, absorb(absorb(s.stream_id, a), b)};
}

}  // namespace rng
}  // namespace sharesim
