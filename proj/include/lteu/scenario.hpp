#pragma once

// Scenario file format: `[section]` headers, `key = value` lines and `#`
// comments. Sections: general (required), radio, handover, fuzzy_rules
// (body is rule DSL text, kept verbatim), fuzzy_terms (`variable.term =
// tri(...)`), auth, coexist. Unknown sections and keys are rejected.

#include <lteu/engine.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace lteu::scenario {

/// Throws ConfigError naming the line for syntax, type, and range errors.
engine::ScenarioConfig parse_scenario_file(std::string_view text);

engine::ScenarioConfig load_scenario_file(const std::filesystem::path& path);

/// Every field is written out, so parse_scenario_file(render_scenario(c)) == c.
std::string render_scenario(const engine::ScenarioConfig& cfg);

/// Applies `section.key=value` (the same keys as the file) to a parsed config.
void apply_override(engine::ScenarioConfig& cfg, std::string_view assignment);

} // namespace lteu::scenario
