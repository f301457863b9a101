#include "sharesim/manifest.hpp"

#include <ctime>
#include <fstream>

#include <json.hpp>

#include "sharesim/errors.hpp"
#include "sharesim/version.hpp"

namespace sharesim {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

RunManifest make_manifest(std::vector<std::string> command_line, SimulationSeed seed,
                          std::string config_json) {
  RunManifest m;
  m.tool_version = kToolVersion;
  m.timestamp_utc = utc_timestamp();
  m.command_line = std::move(command_line);
  m.seed = seed;
  m.config_json = std::move(config_json);
  return m;
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json root = {
      {"tool", "sharesim"},
      {"tool_version", manifest.tool_version},
      {"session_log_format", kSessionLogFormatVersion},
      {"sweep_table_format", kSweepTableFormatVersion},
      {"timestamp_utc", manifest.timestamp_utc},
      {"command_line", manifest.command_line},
      {"seed", {{"value", manifest.seed.seed}, {"stream", manifest.seed.stream_id}}},
  };
  if (!manifest.config_json.empty()) {
    root["config"] = nlohmann::json::parse(manifest.config_json);
  }
  for (const auto& [key, value] : manifest.parameters) {
    root["parameters"][key] = value;
  }
  return root.dump();
}

void write_manifest_file(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << manifest_to_json(manifest) << '\n';
  if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace sharesim
