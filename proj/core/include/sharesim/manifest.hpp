#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sharesim/rng.hpp"

namespace sharesim {

// Reproduction metadata attached to every output: the exact invocation plus
// the config snapshot it ran with. Replaying `command_line` against the
// embedded config regenerates identical data sections; only the timestamp
// differs between replays.
struct RunManifest {
  std::string tool_version;
  std::string timestamp_utc;  // ISO 8601, seconds resolution
  std::vector<std::string> command_line;
  SimulationSeed seed;
  std::string config_json;  // canonical ToolConfig snapshot
  std::map<std::string, std::string> parameters;  // per-command extras (n, out, ...)
};

RunManifest make_manifest(std::vector<std::string> command_line, SimulationSeed seed,
                          std::string config_json);

std::string manifest_to_json(const RunManifest& manifest);

void write_manifest_file(const std::filesystem::path& path, const RunManifest& manifest);

// Current UTC wall-clock time as an ISO 8601 string.
std::string utc_timestamp();

}  // namespace sharesim
