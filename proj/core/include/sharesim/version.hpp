#pragma once

namespace sharesim {

inline constexpr const char* kToolVersion = "1.0.0";

// Bumped whenever the on-disk schema of the corresponding file changes.
inline constexpr int kSessionLogFormatVersion = 1;
inline constexpr int kSweepTableFormatVersion = 1;

}  // namespace sharesim
