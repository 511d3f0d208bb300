#pragma once

// Scenario file format.
//
//   seed = 42                 # top-level keys: seed, kind, ue_count, drops
//   kind = "arch2"
//
//   [policy]                  # dotted sections: drop, policy, power, coverage,
//   kind = "hybrid"           # rach, radio, flags, backhaul
//
//   [[cell]]                  # one block per cell
//   id = 1
//   class = "wide-area"
//
//   [[ue]]                    # optional fixed-position UEs
//   x = 1000
//   y = 0
//
// '#' starts a comment. Strings may be quoted or bare words. Lists are
// bracketed, comma-separated numbers. docs/config.md lists every key.

#include <filesystem>
#include <string>
#include <string_view>

#include "nbsim/engine.hpp"

namespace nbsim {

/// Parses and fully validates a scenario. Throws ConfigError carrying every
/// problem found (syntax, unknown keys, missing seed, invariant breaches).
ScenarioConfig parse_config(std::string_view text);

/// Reads and parses a scenario file; an unreadable path is a ConfigError.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical text with every field written out, defaults included.
/// parse_config(serialize_config(c)) == c for every valid c.
std::string serialize_config(const ScenarioConfig& config);

/// Sets one field addressed by its dotted key: "seed", "policy.kind",
/// "cell.<id>.<field>", "ue.<index>.x". Does not revalidate.
/// Throws ConfigError on an unknown key or a malformed value.
void apply_override(ScenarioConfig& config, std::string_view key, std::string_view value);

}  // namespace nbsim
