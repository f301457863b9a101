#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sharesim/experiment.hpp"
#include "sharesim/simulator.hpp"
#include "sharesim/types.hpp"

namespace sharesim {

// Everything a tool run needs, read from one JSON config file:
//
//   {
//     "variants": [
//       {"name": "control",     "probability": 0.50, "gamma": 0.1},
//       {"name": "treatment_a", "probability": 0.25, "gamma": 0.2},
//       {"name": "treatment_b", "probability": 0.25, "gamma": 0.3}
//     ],
//     "max_chain_length": 1000000,      // optional
//     "depth_drift": 0.0,               // optional misspecification knob
//     "sweep": {                        // optional; required by `sweep`
//       "sample_sizes": [100, 300, 1000, 3000, 10000, 30000, 100000],
//       "repetitions": 32,
//       "seed": 1,
//       "stream": 0,                    // optional
//       "estimators": ["naive", "diff_in_qs", "diff_in_geometrics"]
//     }
//   }
//
// Names are cosmetic; everything downstream identifies variants by index.
struct ToolConfig {
  SharingMdpConfig mdp;
  MisspecificationKnob knob;
  std::vector<std::string> variant_names;
  std::optional<SweepPlan> sweep;
};

inline const std::vector<std::int64_t> kDefaultSweepSizes = {100,   300,   1000,  3000,
                                                             10000, 30000, 100000};

// Throws ConfigError with the offending field named; the MDP section is
// validated with validate_config.
ToolConfig parse_tool_config(const std::string& json_text);
ToolConfig load_tool_config(const std::filesystem::path& path);

// Canonical single-line JSON snapshot, embedded in run manifests so any
// output can be regenerated without the original config file.
std::string tool_config_to_json(const ToolConfig& config);

}  // namespace sharesim
