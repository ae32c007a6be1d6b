#pragma once

// The six-input handover vocabulary and rule base shipped by default, and the
// decide_handoff() entry point used by the fuzzy handover decider.

#include <lteu/fuzzy.hpp>

#include <string_view>

namespace lteu::fuzzy {

namespace var {
inline constexpr std::string_view sinr = "SINR_in_db";
inline constexpr std::string_view velocity = "Velocity_(V)_of_UE_in_kmh/hr";
inline constexpr std::string_view auth = "Authorization_access";
inline constexpr std::string_view latency = "Latency_in_ms";
inline constexpr std::string_view battery = "UE_battery_level_in_hrs_left";
inline constexpr std::string_view load = "Load_in_Mbps";
inline constexpr std::string_view decision = "Handoff_decision_value";
} // namespace var

/// Rule (1) as published, plus the complementary rules of the default base.
extern const std::string_view kPublishedRule;
extern const std::string_view kDefaultRuleText;

std::vector<LinguisticVariable> default_input_variables();
LinguisticVariable default_output_variable();

/// Default vocabulary with the given rule text (default rules if empty).
RuleBase make_handover_rule_base(std::string_view rule_text = {},
                                 int resolution = RuleBase::kDefaultResolution);

/// Latency requirement stands in for the application class.
struct LatencyEncoding
{
  double real_time_ms = 20.0;
  double non_real_time_ms = 90.0;

  friend bool operator==(const LatencyEncoding&, const LatencyEncoding&) = default;
};

/// Crisp decider inputs for one candidate cell.
struct HandoffInputs
{
  double sinr_margin_db = 0.0; ///< target minus serving
  double speed_kmh = 0.0;
  bool authorized = true;
  TrafficClass traffic = TrafficClass::real_time;
  double battery_hours = 0.0;
  double load_mbps = 0.0;
};

std::map<std::string, double, std::less<>>
to_crisp_inputs(const HandoffInputs& in, const LatencyEncoding& latency = {});

/// `recommend` is value >= threshold; a rule base where nothing fires gives value 0.
HandoffAdvice decide_handoff(const RuleBase& rb,
                             const HandoffInputs& in,
                             double threshold,
                             const LatencyEncoding& latency = {});

} // namespace lteu::fuzzy
