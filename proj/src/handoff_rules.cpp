#include <lteu/handoff_rules.hpp>

namespace lteu::fuzzy {

const std::string_view kPublishedRule =
  "If (SINR_in_db is near_RTH) or\n"
  "(Velocity_(V)_of_UE_in_kmh/hr is\n"
  "high) or (Load_in_Mbps is low) or\n"
  "(Latency_in_ms is voice/gaming) or\n"
  "(UE_battery_level_in_hrs_left is\n"
  "high) then (Handoff_decision_value is\n"
  "handoff) (1)\n";

const std::string_view kDefaultRuleText =
  "if (SINR_in_db is near_RTH) or (Velocity_(V)_of_UE_in_kmh/hr is high) or (Load_in_Mbps is low)"
  " or (Latency_in_ms is voice/gaming) or (UE_battery_level_in_hrs_left is high)"
  " then (Handoff_decision_value is handoff)\n"
  "if (SINR_in_db is high) then (Handoff_decision_value is handoff)\n"
  "if (SINR_in_db is low) then (Handoff_decision_value is no_handoff)\n"
  "if (Load_in_Mbps is high) and (Latency_in_ms is data) then (Handoff_decision_value is no_handoff)\n"
  "if (UE_battery_level_in_hrs_left is low) and (Latency_in_ms is data)"
  " then (Handoff_decision_value is no_handoff)\n"
  "if (Authorization_access is denied) and (Load_in_Mbps is high)"
  " then (Handoff_decision_value is no_handoff)\n";

std::vector<LinguisticVariable>
default_input_variables()
{
  using MF = MembershipFunction;
  std::vector<LinguisticVariable> vars;
  // Margin of target over serving SINR. RTH sits at 3 dB; "high" saturates at
  // the near_RTH peak so that handoff support never falls as SINR rises.
  vars.emplace_back(std::string(var::sinr), -10.0, 10.0, "dB",
                    std::vector<std::pair<std::string, MF>>{
                      {"low", MF::trapezoid(-10, -10, -3, 3)},
                      {"near_RTH", MF::triangle(0, 3, 6)},
                      {"high", MF::trapezoid(1.5, 3, 10, 10)},
                    });
  // low/high cross at 10 km/h, the velocity gate of the crisp algorithm.
  vars.emplace_back(std::string(var::velocity), 0.0, 120.0, "km/h",
                    std::vector<std::pair<std::string, MF>>{
                      {"low", MF::trapezoid(0, 0, 5, 15)},
                      {"high", MF::trapezoid(5, 15, 120, 120)},
                    });
  vars.emplace_back(std::string(var::auth), 0.0, 1.0, "",
                    std::vector<std::pair<std::string, MF>>{
                      {"denied", MF::triangle(0, 0, 1)},
                      {"granted", MF::triangle(0, 1, 1)},
                    });
  vars.emplace_back(std::string(var::latency), 0.0, 100.0, "ms",
                    std::vector<std::pair<std::string, MF>>{
                      {"voice/gaming", MF::trapezoid(0, 0, 30, 70)},
                      {"data", MF::trapezoid(30, 70, 100, 100)},
                    });
  vars.emplace_back(std::string(var::battery), 0.0, 10.0, "h",
                    std::vector<std::pair<std::string, MF>>{
                      {"low", MF::trapezoid(0, 0, 2, 5)},
                      {"high", MF::trapezoid(2, 5, 10, 10)},
                    });
  vars.emplace_back(std::string(var::load), 0.0, 100.0, "Mbps",
                    std::vector<std::pair<std::string, MF>>{
                      {"low", MF::trapezoid(0, 0, 20, 60)},
                      {"high", MF::trapezoid(20, 60, 100, 100)},
                    });
  return vars;
}

LinguisticVariable
default_output_variable()
{
  using MF = MembershipFunction;
  return LinguisticVariable(std::string(var::decision), 0.0, 1.0, "",
                            {
                              {"no_handoff", MF::triangle(0, 0, 0.4)},
                              {"handoff", MF::triangle(0.6, 1, 1)},
                            });
}

RuleBase
make_handover_rule_base(std::string_view rule_text, int resolution)
{
  return RuleBase::from_text(default_input_variables(), default_output_variable(),
                             rule_text.empty() ? kDefaultRuleText : rule_text, resolution);
}

std::map<std::string, double, std::less<>>
to_crisp_inputs(const HandoffInputs& in, const LatencyEncoding& latency)
{
  return {
    {std::string(var::sinr), in.sinr_margin_db},
    {std::string(var::velocity), in.speed_kmh},
    {std::string(var::auth), in.authorized ? 1.0 : 0.0},
    {std::string(var::latency),
     in.traffic == TrafficClass::real_time ? latency.real_time_ms : latency.non_real_time_ms},
    {std::string(var::battery), in.battery_hours},
    {std::string(var::load), in.load_mbps},
  };
}

HandoffAdvice
decide_handoff(const RuleBase& rb, const HandoffInputs& in, double threshold, const LatencyEncoding& latency)
{
  HandoffAdvice advice;
  try
    {
      advice.value = rb.infer(to_crisp_inputs(in, latency)).crisp;
    }
  catch (const NoRuleFired&)
    {
      return advice;
    }
  advice.recommend = advice.value >= threshold;
  return advice;
}

} // namespace lteu::fuzzy
