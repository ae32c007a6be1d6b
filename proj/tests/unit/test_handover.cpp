#include <lteu/handover.hpp>

#include "../support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace lteu;
using namespace lteu::handover;

namespace {

Measurement
one_candidate(CellKind serving, double serving_sinr, CellKind target, double target_sinr, double speed,
              bool authorized, TrafficClass traffic)
{
  Measurement m;
  m.serving = {CellId{0}, serving, serving_sinr};
  CandidateMeasurement c;
  c.id = CellId{1};
  c.kind = target;
  c.sinr_db = target_sinr;
  c.rx_dbm = -70;
  c.authorized = authorized;
  c.position = {500, 0};
  m.candidates.push_back(c);
  m.speed_kmh = speed;
  m.ue_velocity_kmh = {speed, 0};
  m.traffic = traffic;
  m.battery_hours = 8;
  return m;
}

constexpr auto macro = CellKind::macro_enb;
constexpr auto micro = CellKind::lteu_microcell;
constexpr auto rt = TrafficClass::real_time;
constexpr auto nrt = TrafficClass::non_real_time;

} // namespace

TEST_CASE("crisp decider examples")
{
  const HandoverConfig cfg; // HHM 3 dB, gate 10 km/h
  SUBCASE("margin exactly HHM does not trigger")
  {
    CHECK(evaluate_crisp_handover(one_candidate(macro, 10, macro, 13, 5, true, rt), cfg).verdict == Verdict::none);
  }
  SUBCASE("fast UE stays off microcells")
  {
    const auto d = evaluate_crisp_handover(one_candidate(macro, 10, micro, 20, 15, true, rt), cfg);
    CHECK(d.verdict == Verdict::none);
  }
  SUBCASE("slow, authorized, real-time into a microcell is proactive")
  {
    const auto d = evaluate_crisp_handover(one_candidate(macro, 10, micro, 20, 5, true, rt), cfg);
    CHECK(d.verdict == Verdict::proactive);
    CHECK(d.target == CellId{1});
    CHECK(d.scenario == Scenario::macro_lteu);
  }
  SUBCASE("unauthorized asks for temporary access")
  {
    const auto d = evaluate_crisp_handover(one_candidate(macro, 10, micro, 20, 5, false, rt), cfg);
    CHECK(d.verdict == Verdict::request_temp_access);
    CHECK(d.target == CellId{1});
  }
  SUBCASE("microcell to macro, non-real-time is reactive")
  {
    const auto d = evaluate_crisp_handover(one_candidate(micro, 0, macro, 10, 50, false, nrt), cfg);
    CHECK(d.verdict == Verdict::reactive_pending);
    CHECK(d.scenario == Scenario::lteu_macro);
  }
  SUBCASE("microcell to microcell checks authorization on the target")
  {
    CHECK(evaluate_crisp_handover(one_candidate(micro, 0, micro, 10, 50, false, nrt), cfg).verdict
          == Verdict::request_temp_access);
    const auto d = evaluate_crisp_handover(one_candidate(micro, 0, micro, 10, 50, true, nrt), cfg);
    CHECK(d.verdict == Verdict::reactive_pending);
    CHECK(d.scenario == Scenario::lteu_lteu);
  }
}

TEST_CASE("crisp decider matches the pseudocode on the 192-point grid")
{
  CHECK(oracle::crisp_grid().size() == 192);
  CHECK(oracle::crisp_mismatches(3.0) == 0);
  CHECK(oracle::crisp_mismatches(0.0) == 0);
  CHECK(oracle::crisp_mismatches(6.0, -4.0) == 0);
}

TEST_CASE("velocity gate boundary takes the slow path")
{
  const HandoverConfig cfg;
  CHECK(evaluate_crisp_handover(one_candidate(macro, 0, micro, 10, 10.0, true, rt), cfg).verdict
        == Verdict::proactive);
  CHECK(evaluate_crisp_handover(one_candidate(macro, 0, micro, 10, 10.0001, true, rt), cfg).verdict
        == Verdict::none);
}

TEST_CASE("macro branch wins over the microcell branch")
{
  const HandoverConfig cfg;
  auto m = one_candidate(macro, 0, micro, 20, 5, true, rt);
  CandidateMeasurement other;
  other.id = CellId{2};
  other.kind = macro;
  other.sinr_db = 5;
  m.candidates.push_back(other);
  const auto d = evaluate_crisp_handover(m, cfg);
  CHECK(d.target == CellId{2});
  CHECK(d.scenario == Scenario::macro_macro);
}

TEST_CASE("fast macro handover goes to the predicted cell")
{
  HandoverConfig cfg;
  cfg.prediction_horizon_s = 60;
  Measurement m;
  m.serving = {CellId{0}, macro, 0};
  m.ue_position = {0, 0};
  m.ue_velocity_kmh = {-60, 0}; // heading west
  m.speed_kmh = 60;
  m.traffic = rt;
  CandidateMeasurement east{CellId{1}, macro, 12, -70, 0, true, {1000, 0}};
  CandidateMeasurement west{CellId{2}, macro, 8, -75, 0, true, {-1000, 0}};
  m.candidates = {east, west};
  CHECK(evaluate_crisp_handover(m, cfg).target == CellId{2});
  m.speed_kmh = 5;
  m.ue_velocity_kmh = {-5, 0};
  CHECK(evaluate_crisp_handover(m, cfg).target == CellId{1});
}

TEST_CASE("crisp properties over random measurements")
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> sinr(-20, 30);
  for (int k = 0; k < 5000; ++k)
    {
      HandoverConfig cfg;
      cfg.hhm_db = std::uniform_real_distribution<double>(0, 8)(rng);
      Measurement m;
      const bool all_macro = k % 2 == 0;
      m.serving = {CellId{0}, rng() % 2 || all_macro ? macro : micro, sinr(rng)};
      const int n = 1 + static_cast<int>(rng() % 6);
      double best = -1e9;
      for (int i = 1; i <= n; ++i)
        {
          CandidateMeasurement c;
          c.id = CellId{i};
          c.kind = all_macro || rng() % 2 ? macro : micro;
          c.sinr_db = sinr(rng);
          c.authorized = all_macro || rng() % 2;
          c.position = {sinr(rng) * 100, sinr(rng) * 100};
          best = std::max(best, c.sinr_db);
          m.candidates.push_back(c);
        }
      m.speed_kmh = std::uniform_real_distribution<double>(0, 30)(rng);
      m.ue_velocity_kmh = {m.speed_kmh, 0};
      m.traffic = rng() % 2 ? rt : nrt;
      const auto d = evaluate_crisp_handover(m, cfg);
      if (!(best > m.serving.sinr_db + cfg.hhm_db))
        {
          REQUIRE(d.verdict == Verdict::none);
        }
      if (d.verdict != Verdict::none)
        {
          REQUIRE(d.target.has_value());
          REQUIRE(*d.target != m.serving.id);
        }
      if (all_macro)
        {
          REQUIRE(d.verdict != Verdict::request_temp_access);
        }
    }
}

TEST_CASE("fuzzy decider")
{
  const auto rb = fuzzy::make_handover_rule_base();
  const HandoverConfig cfg;
  SUBCASE("clear margin on a slow, real-time UE hands over")
  {
    // 3 dB past the serving cell, slow, real time, authorized, lightly loaded.
    auto m = one_candidate(macro, 10, micro, 13.01, 5, true, rt);
    m.candidates[0].load_mbps = 10;
    const auto d = evaluate_fuzzy_handover(m, rb, cfg);
    CHECK(d.verdict != Verdict::none);
    REQUIRE(d.decision_value.has_value());
    CHECK(*d.decision_value > 0.8);
  }
  SUBCASE("no rule fired gives none")
  {
    const auto only_low = fuzzy::make_handover_rule_base(
      "if (SINR_in_db is low) then (Handoff_decision_value is no_handoff)");
    const auto d = evaluate_fuzzy_handover(one_candidate(macro, 0, micro, 10, 5, true, rt), only_low, cfg);
    CHECK(d.verdict == Verdict::none);
    CHECK(d.decision_value.value_or(0.0) == 0.0);
  }
  SUBCASE("unauthorized microcell above threshold requests access")
  {
    // Hand trace: margin 5 dB gives SINR high = 1, so the handoff term is
    // clipped at 1; no_handoff rules need low SINR or high load, both 0.
    auto m = one_candidate(macro, 0, micro, 5, 5, false, rt);
    m.candidates[0].load_mbps = 5;
    const auto d = evaluate_fuzzy_handover(m, rb, cfg);
    CHECK(d.verdict == Verdict::request_temp_access);
    CHECK(d.target == CellId{1});
  }
  SUBCASE("nothing past the hysteresis margin")
  {
    const auto d = evaluate_fuzzy_handover(one_candidate(macro, 0, micro, 2.9, 5, true, rt), rb, cfg);
    CHECK(d.verdict == Verdict::none);
  }
  SUBCASE("non-real-time to macro is reactive")
  {
    const auto d = evaluate_fuzzy_handover(one_candidate(micro, 0, macro, 8, 5, true, nrt), rb, cfg);
    CHECK(d.verdict == Verdict::reactive_pending);
    CHECK(d.scenario == Scenario::lteu_macro);
  }
}
