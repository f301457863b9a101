#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "sharesim/types.hpp"

namespace sharesim {

// Line-delimited session log:
//
//   # free-form comment / manifest lines
//   trajectory_id,position,variant,reward
//   0,0,0,1
//   0,1,2,0
//
// Comment lines and the header are optional on input. Integer fields
// round-trip exactly. Sessions appear in trajectory order, then position
// order, and each chain must satisfy the trajectory invariant; violations
// are reported with 1-based line numbers.
inline constexpr const char* kSessionLogHeader = "trajectory_id,position,variant,reward";

void write_session_log(std::ostream& out, const Dataset& dataset,
                       std::span<const std::string> comment_lines = {});

void write_session_log_file(const std::filesystem::path& path, const Dataset& dataset,
                            std::span<const std::string> comment_lines = {});

// `logging_policy` supplies the propensities the estimators will use; it is
// never inferred from the log itself. Variant indices in the log must be
// within the policy's range.
Dataset parse_session_log(std::istream& in, ProductionPolicy logging_policy);

Dataset parse_session_log_file(const std::filesystem::path& path, ProductionPolicy logging_policy);

}  // namespace sharesim
