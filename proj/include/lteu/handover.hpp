#pragma once

// Handover decision logic: the crisp four-branch algorithm (hysteresis
// margin, velocity gate, authorization, proactive/reactive timing), the fuzzy
// alternative, and the per-UE session state machine that executes decisions.

#include <lteu/common.hpp>
#include <lteu/handoff_rules.hpp>

#include <functional>
#include <optional>
#include <vector>

namespace lteu::handover {

enum class DeciderKind { crisp, fuzzy };

struct HandoverConfig
{
  double hhm_db = 3.0;
  double velocity_gate_kmh = 10.0;
  double reactive_threshold_dbm = -95.0;
  DeciderKind decider = DeciderKind::crisp;
  double fuzzy_threshold = 0.5;
  double prediction_horizon_s = 5.0;
  double pingpong_window_s = 5.0;

  friend bool operator==(const HandoverConfig&, const HandoverConfig&) = default;
};

struct ServingMeasurement
{
  CellId id{};
  CellKind kind = CellKind::macro_enb;
  double sinr_db = 0.0;
};

struct CandidateMeasurement
{
  CellId id{};
  CellKind kind = CellKind::macro_enb;
  double sinr_db = 0.0;
  double rx_dbm = 0.0;
  double load_mbps = 0.0;
  bool authorized = true;
  Vec2 position; ///< used by mobility prediction
};

/// Per-tick decision inputs for one UE. The serving cell is never a candidate.
struct Measurement
{
  ServingMeasurement serving;
  std::vector<CandidateMeasurement> candidates;
  Vec2 ue_position;
  Vec2 ue_velocity_kmh;
  double speed_kmh = 0.0;
  TrafficClass traffic = TrafficClass::real_time;
  double battery_hours = 0.0;
};

enum class Verdict { none, proactive, reactive_pending, request_temp_access };
enum class Scenario { macro_macro, macro_lteu, lteu_lteu, lteu_macro, not_applicable };

const char* to_string(Verdict v);
const char* to_string(Scenario s);
Scenario scenario_between(CellKind serving, CellKind target);

struct HandoverDecision
{
  Verdict verdict = Verdict::none;
  std::optional<CellId> target;
  Scenario scenario = Scenario::not_applicable;
  std::optional<double> decision_value; ///< fuzzy decider only

  friend bool operator==(const HandoverDecision&, const HandoverDecision&) = default;
};

/**
 * The crisp algorithm. Branches are tried in order macro→macro,
 * macro→LTE-U, LTE-U→LTE-U, LTE-U→macro and the first whose trigger
 * `SINR(target) > SINR(serving) + HHM` holds decides. Within a branch the
 * strongest triggering candidate is the target, except that a fast UE
 * (speed > gate) changing macrocells is steered to the predicted cell.
 */
HandoverDecision evaluate_crisp_handover(const Measurement& m, const HandoverConfig& cfg);

/**
 * Fuzzy decider over the strongest candidate. Nothing happens unless that
 * candidate clears the hysteresis margin; otherwise a recommendation is
 * refined exactly like the crisp path (temporary access for an
 * unauthorized microcell, proactive or reactive by traffic class).
 */
HandoverDecision evaluate_fuzzy_handover(const Measurement& m,
                                         const fuzzy::RuleBase& rb,
                                         const HandoverConfig& cfg,
                                         const fuzzy::LatencyEncoding& latency = {});

struct PendingReactive
{
  CellId target{};
  double armed_at_s = 0.0;

  friend bool operator==(const PendingReactive&, const PendingReactive&) = default;
};

struct UeSessionState
{
  CellId serving{};
  std::optional<CellId> previous_serving;
  std::optional<PendingReactive> pending_reactive;
  std::optional<double> last_handover_s;
  int handover_count = 0;
  int pingpong_count = 0;
};

struct Execution
{
  CellId from{};
  CellId to{};
  Verdict cause = Verdict::proactive;
  bool pingpong = false;
};

struct SessionStep
{
  UeSessionState state;
  std::optional<Execution> executed;
};

/// Current received power of a cell, if the caller knows it.
using RxLookup = std::function<std::optional<double>(CellId)>;

/**
 * Applies a decision at time t. Proactive decisions execute immediately.
 * Reactive decisions arm and execute once the target's received power
 * reaches `cfg.reactive_threshold_dbm`; a newer decision naming another
 * target cancels the armed one. Returning to the previous cell within
 * `cfg.pingpong_window_s` of the last handover counts as a ping-pong.
 */
SessionStep advance_session(UeSessionState state,
                            const HandoverDecision& decision,
                            const RxLookup& rx_of,
                            double t_s,
                            const HandoverConfig& cfg);

} // namespace lteu::handover
