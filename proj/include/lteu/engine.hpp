#pragma once

// Fixed-timestep simulation of UEs moving over a macro/LTE-U microcell
// layout, taking handover decisions and accruing per-UE metrics.

#include <lteu/authorization.hpp>
#include <lteu/coexistence.hpp>
#include <lteu/handover.hpp>
#include <lteu/radio.hpp>
#include <lteu/topology.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace lteu::engine {

struct RadioParams
{
  double cell_radius_m = 2000.0;
  double macro_tx_dbm = 43.0;
  double micro_tx_dbm = 10.0;
  double macro_shadow_std_db = 8.0;
  double micro_shadow_std_db = 8.0;
  radio::PathLossModel macro_path_loss = radio::PathLossModel::macro();
  radio::PathLossModel micro_path_loss = radio::PathLossModel::micro();
  double bandwidth_mhz = 20.0;
  std::optional<double> noise_dbm; ///< defaults to thermal noise over the bandwidth
  double per_ue_load_mbps = 5.0;

  double effective_noise_dbm() const;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

struct TermOverride
{
  std::string variable;
  std::string term;
  fuzzy::MembershipFunction shape;

  friend bool operator==(const TermOverride&, const TermOverride&) = default;
};

/// Microcell access policy. Cells not listed follow `default_open`.
struct AccessPolicy
{
  bool default_open = true;
  std::set<CellId> closed_cells;
  std::map<CellId, std::string> owners;
  std::map<CellId, std::set<std::string>> users;
  bool auto_grant = true;
  double grant_delay_s = 0.0;
  std::map<CellId, bool> auto_grant_per_cell;
  std::map<CellId, double> grant_delay_per_cell;

  bool is_closed(CellId cell) const;
  std::string owner_of(CellId cell) const;
  bool auto_grant_for(CellId cell) const;
  double grant_delay_for(CellId cell) const;

  friend bool operator==(const AccessPolicy&, const AccessPolicy&) = default;
};

struct ScenarioConfig
{
  std::optional<std::uint64_t> seed;
  double sim_time_s = 100.0;
  double dt_s = 0.1;
  int n_macro = 4;
  int micro_per_cell = 15;
  int n_ues = 20;
  std::string output_path;

  RadioParams radio;
  topology::MobilityConfig mobility;
  handover::HandoverConfig handover;
  int fuzzy_resolution = fuzzy::RuleBase::kDefaultResolution;
  fuzzy::LatencyEncoding latency;
  std::string fuzzy_rules; ///< rule DSL; empty selects the default rule base
  std::vector<TermOverride> fuzzy_terms;

  AccessPolicy access;

  coexist::CoexistConfig coexist;
  int coexist_seeds = 10;

  /// Cross-field checks; throws ConfigError.
  void validate() const;

  std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Default vocabulary with the configured term overrides and rule text.
fuzzy::RuleBase build_rule_base(const ScenarioConfig& cfg);

struct CellRef
{
  CellId id{};
  CellKind kind = CellKind::macro_enb;

  friend bool operator==(const CellRef&, const CellRef&) = default;
};

enum class EventKind { measure, decide, handover_exec, temp_request, temp_grant };
const char* to_string(EventKind kind);

struct EventRecord
{
  double t_s = 0.0;
  UeId ue{};
  EventKind event = EventKind::measure;
  CellRef serving;
  std::optional<CellRef> target;
  std::optional<double> sinr_serving_db;
  std::optional<double> sinr_target_db;
  std::optional<double> decision_value;
  std::optional<handover::Verdict> verdict;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct UeMetrics
{
  std::array<int, 4> handovers{}; ///< indexed by handover::Scenario
  int pingpong = 0;
  int temp_requests = 0;
  int temp_grants = 0;
  double throughput_sum_mbps = 0.0;
  std::int64_t samples = 0;
  std::int64_t micro_samples = 0;

  int handover_total() const;
  int handovers_of(handover::Scenario s) const { return handovers.at(static_cast<std::size_t>(s)); }
  double mean_throughput_mbps() const;
  double time_in_microcell() const;

  void add(const UeMetrics& other);

  friend bool operator==(const UeMetrics&, const UeMetrics&) = default;
};

struct Metrics
{
  std::vector<UeMetrics> per_ue;

  /// Sum over UEs.
  UeMetrics aggregate() const;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct RunResult
{
  std::vector<EventRecord> events;
  Metrics metrics;
  std::uint64_t seed = 0;
};

/// Deterministic run of one scenario; the config must carry a seed or `fallback_seed` is used.
RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t fallback_seed = 1);

/// Runs independent scenarios concurrently; results keep input order.
std::vector<RunResult> run_sweep(std::span<const ScenarioConfig> configs);

struct SummaryContext
{
  double bandwidth_mhz = 20.0;
  double pingpong_window_s = 5.0;
};

/// Recomputes metrics from an event log; throws if timestamps go backwards.
Metrics summarize_metrics(std::span<const EventRecord> log, const SummaryContext& ctx);

inline SummaryContext
summary_context(const ScenarioConfig& cfg)
{
  return {cfg.radio.bandwidth_mhz, cfg.handover.pingpong_window_s};
}

} // namespace lteu::engine
