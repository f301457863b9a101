#include "sharesim/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sharesim/errors.hpp"

namespace sharesim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

const json& require_field(const json& object, const char* key, const char* where) {
  const auto it = object.find(key);
  if (it == object.end()) fail(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

double require_number(const json& value, const std::string& where) {
  if (!value.is_number()) fail(where + " must be a number");
  return value.get<double>();
}

std::int64_t require_integer(const json& value, const std::string& where) {
  if (!value.is_number_integer()) fail(where + " must be an integer");
  return value.get<std::int64_t>();
}

SweepPlan parse_sweep_section(const json& section, const SharingMdpConfig& mdp,
                              const MisspecificationKnob& knob) {
  if (!section.is_object()) fail("'sweep' must be an object");
  SweepPlan plan;
  plan.config = mdp;
  plan.knob = knob;
  plan.sample_sizes = kDefaultSweepSizes;

  if (const auto it = section.find("sample_sizes"); it != section.end()) {
    if (!it->is_array() || it->empty()) fail("'sweep.sample_sizes' must be a non-empty array");
    plan.sample_sizes.clear();
    for (const json& v : *it) {
      plan.sample_sizes.push_back(require_integer(v, "'sweep.sample_sizes' entry"));
    }
  }
  if (const auto it = section.find("repetitions"); it != section.end()) {
    plan.repetitions = static_cast<std::int32_t>(require_integer(*it, "'sweep.repetitions'"));
  }
  if (const auto it = section.find("seed"); it != section.end()) {
    plan.base_seed.seed = static_cast<std::uint64_t>(require_integer(*it, "'sweep.seed'"));
  }
  if (const auto it = section.find("stream"); it != section.end()) {
    plan.base_seed.stream_id = static_cast<std::uint64_t>(require_integer(*it, "'sweep.stream'"));
  }
  if (const auto it = section.find("estimators"); it != section.end()) {
    if (!it->is_array() || it->empty()) fail("'sweep.estimators' must be a non-empty array");
    plan.estimators.clear();
    for (const json& v : *it) {
      if (!v.is_string()) fail("'sweep.estimators' entries must be strings");
      const auto kind = parse_estimator_kind(v.get<std::string>());
      if (!kind) {
        fail("unknown estimator '" + v.get<std::string>() +
             "'; expected naive, diff_in_qs or diff_in_geometrics");
      }
      plan.estimators.push_back(*kind);
    }
  }
  validate_plan(plan);
  return plan;
}

}  // namespace

ToolConfig parse_tool_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("config root must be a JSON object");

  const json& variants = require_field(root, "variants", "config");
  if (!variants.is_array() || variants.size() < 2) {
    fail("'variants' must be an array with at least 2 entries");
  }

  ToolConfig config;
  for (std::size_t a = 0; a < variants.size(); ++a) {
    const json& entry = variants[a];
    const std::string where = "variants[" + std::to_string(a) + "]";
    if (!entry.is_object()) fail(where + " must be an object");
    config.mdp.policy.probs.push_back(
        require_number(require_field(entry, "probability", where.c_str()), where + ".probability"));
    config.mdp.gammas.push_back(
        require_number(require_field(entry, "gamma", where.c_str()), where + ".gamma"));
    if (const auto it = entry.find("name"); it != entry.end() && it->is_string()) {
      config.variant_names.push_back(it->get<std::string>());
    } else {
      config.variant_names.push_back("variant_" + std::to_string(a));
    }
  }
  if (const auto it = root.find("max_chain_length"); it != root.end()) {
    config.mdp.max_chain_length = require_integer(*it, "'max_chain_length'");
  }
  if (const auto it = root.find("depth_drift"); it != root.end()) {
    config.knob.depth_drift = require_number(*it, "'depth_drift'");
  }
  config.mdp = validate_config(std::move(config.mdp));

  if (const auto it = root.find("sweep"); it != root.end()) {
    config.sweep = parse_sweep_section(*it, config.mdp, config.knob);
  }
  return config;
}

ToolConfig load_tool_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_tool_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string tool_config_to_json(const ToolConfig& config) {
  json variants = json::array();
  for (std::size_t a = 0; a < config.mdp.variant_count(); ++a) {
    variants.push_back({{"name", config.variant_names[a]},
                        {"probability", config.mdp.policy.probs[a]},
                        {"gamma", config.mdp.gammas[a]}});
  }
  json root = {{"variants", variants},
               {"max_chain_length", config.mdp.max_chain_length},
               {"depth_drift", config.knob.depth_drift}};
  if (config.sweep) {
    json estimators = json::array();
    for (EstimatorKind kind : config.sweep->estimators) estimators.push_back(to_string(kind));
    root["sweep"] = {{"sample_sizes", config.sweep->sample_sizes},
                     {"repetitions", config.sweep->repetitions},
                     {"seed", config.sweep->base_seed.seed},
                     {"stream", config.sweep->base_seed.stream_id},
                     {"estimators", estimators}};
  }
  return root.dump();
}

}  // namespace sharesim
