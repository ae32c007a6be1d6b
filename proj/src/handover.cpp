#include <lteu/handover.hpp>
#include <lteu/topology.hpp>

#include <spdlog/spdlog.h>

namespace lteu::handover {

const char*
to_string(Verdict v)
{
  switch (v)
    {
    case Verdict::none:
      return "none";
    case Verdict::proactive:
      return "proactive";
    case Verdict::reactive_pending:
      return "reactive_pending";
    case Verdict::request_temp_access:
      return "request_temp_access";
    }
  return "?";
}

const char*
to_string(Scenario s)
{
  switch (s)
    {
    case Scenario::macro_macro:
      return "macro_macro";
    case Scenario::macro_lteu:
      return "macro_lteu";
    case Scenario::lteu_lteu:
      return "lteu_lteu";
    case Scenario::lteu_macro:
      return "lteu_macro";
    case Scenario::not_applicable:
      return "n/a";
    }
  return "?";
}

Scenario
scenario_between(CellKind serving, CellKind target)
{
  if (serving == CellKind::macro_enb)
    {
      return target == CellKind::macro_enb ? Scenario::macro_macro : Scenario::macro_lteu;
    }
  return target == CellKind::macro_enb ? Scenario::lteu_macro : Scenario::lteu_lteu;
}

namespace {

Verdict
by_traffic(TrafficClass traffic)
{
  return traffic == TrafficClass::real_time ? Verdict::proactive : Verdict::reactive_pending;
}

std::vector<const CandidateMeasurement*>
triggered(const Measurement& m, CellKind kind, double hhm_db)
{
  std::vector<const CandidateMeasurement*> out;
  for (const auto& c : m.candidates)
    {
      if (c.kind == kind && c.sinr_db > m.serving.sinr_db + hhm_db)
        {
          out.push_back(&c);
        }
    }
  return out;
}

const CandidateMeasurement*
strongest(const std::vector<const CandidateMeasurement*>& cands)
{
  const CandidateMeasurement* best = nullptr;
  for (const auto* c : cands)
    {
      if (best == nullptr || c->sinr_db > best->sinr_db || (c->sinr_db == best->sinr_db && c->id < best->id))
        {
          best = c;
        }
    }
  return best;
}

HandoverDecision
decide(Verdict verdict, const CandidateMeasurement& target, Scenario scenario)
{
  return HandoverDecision{verdict, target.id, scenario, std::nullopt};
}

// Authorization gate shared by every branch entering a microcell.
Verdict
admit_microcell(const CandidateMeasurement& target, TrafficClass traffic)
{
  return target.authorized ? by_traffic(traffic) : Verdict::request_temp_access;
}

} // namespace

HandoverDecision
evaluate_crisp_handover(const Measurement& m, const HandoverConfig& cfg)
{
  const bool fast = m.speed_kmh > cfg.velocity_gate_kmh;

  if (m.serving.kind == CellKind::macro_enb)
    {
      if (auto macros = triggered(m, CellKind::macro_enb, cfg.hhm_db); !macros.empty())
        {
          const CandidateMeasurement* target = strongest(macros);
          if (fast)
            {
              std::vector<std::pair<CellId, Vec2>> pts;
              for (const auto* c : macros)
                {
                  pts.emplace_back(c->id, c->position);
                }
              const CellId predicted =
                topology::predict_target_cell(m.ue_position, m.ue_velocity_kmh, pts, cfg.prediction_horizon_s);
              for (const auto* c : macros)
                {
                  if (c->id == predicted)
                    {
                      target = c;
                    }
                }
            }
          return decide(by_traffic(m.traffic), *target, Scenario::macro_macro);
        }
      if (auto micros = triggered(m, CellKind::lteu_microcell, cfg.hhm_db); !micros.empty())
        {
          if (fast)
            {
              return HandoverDecision{Verdict::none, std::nullopt, Scenario::macro_lteu, std::nullopt};
            }
          const CandidateMeasurement* target = strongest(micros);
          return decide(admit_microcell(*target, m.traffic), *target, Scenario::macro_lteu);
        }
      return {};
    }

  if (auto micros = triggered(m, CellKind::lteu_microcell, cfg.hhm_db); !micros.empty())
    {
      const CandidateMeasurement* target = strongest(micros);
      return decide(admit_microcell(*target, m.traffic), *target, Scenario::lteu_lteu);
    }
  if (auto macros = triggered(m, CellKind::macro_enb, cfg.hhm_db); !macros.empty())
    {
      return decide(by_traffic(m.traffic), *strongest(macros), Scenario::lteu_macro);
    }
  return {};
}

HandoverDecision
evaluate_fuzzy_handover(const Measurement& m,
                        const fuzzy::RuleBase& rb,
                        const HandoverConfig& cfg,
                        const fuzzy::LatencyEncoding& latency)
{
  std::vector<const CandidateMeasurement*> all;
  for (const auto& c : m.candidates)
    {
      all.push_back(&c);
    }
  const CandidateMeasurement* best = strongest(all);
  if (best == nullptr || !(best->sinr_db > m.serving.sinr_db + cfg.hhm_db))
    {
      return {};
    }

  fuzzy::HandoffInputs in;
  in.sinr_margin_db = best->sinr_db - m.serving.sinr_db;
  in.speed_kmh = m.speed_kmh;
  in.authorized = best->authorized;
  in.traffic = m.traffic;
  in.battery_hours = m.battery_hours;
  in.load_mbps = best->load_mbps;

  fuzzy::HandoffAdvice advice;
  try
    {
      advice = fuzzy::decide_handoff(rb, in, cfg.fuzzy_threshold, latency);
    }
  catch (const Error& e)
    {
      spdlog::warn("fuzzy handover decider failed, no handover: {}", e.what());
      return {};
    }

  const Scenario scenario = scenario_between(m.serving.kind, best->kind);
  HandoverDecision d{Verdict::none, std::nullopt, scenario, advice.value};
  if (!advice.recommend)
    {
      return d;
    }
  d.target = best->id;
  d.verdict = best->kind == CellKind::lteu_microcell ? admit_microcell(*best, m.traffic) : by_traffic(m.traffic);
  return d;
}

} // namespace lteu::handover
