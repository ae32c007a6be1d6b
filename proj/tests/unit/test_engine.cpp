#include <lteu/engine.hpp>

#include "../support/audit.hpp"

#include <doctest.h>

using namespace lteu;
using namespace lteu::engine;

namespace {

ScenarioConfig
small(std::uint64_t seed, double sim_time_s = 20.0)
{
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.sim_time_s = sim_time_s;
  cfg.n_ues = 10;
  return cfg;
}

EventRecord
exec_event(double t, int ue, int from, int to)
{
  EventRecord e;
  e.t_s = t;
  e.ue = UeId{ue};
  e.event = EventKind::handover_exec;
  e.serving = {CellId{from}, CellKind::macro_enb};
  e.target = CellRef{CellId{to}, CellKind::macro_enb};
  e.verdict = handover::Verdict::proactive;
  return e;
}

} // namespace

TEST_CASE("no UEs, no events")
{
  auto cfg = small(1);
  cfg.n_ues = 0;
  const auto r = run_scenario(cfg);
  CHECK(r.events.empty());
  CHECK(r.metrics.per_ue.empty());
  CHECK(r.metrics.aggregate() == UeMetrics{});
}

TEST_CASE("runs are deterministic and seed-sensitive")
{
  const auto a = run_scenario(small(5));
  const auto b = run_scenario(small(5));
  CHECK(a.events == b.events);
  CHECK(a.metrics == b.metrics);
  CHECK(a.seed == 5);
  const auto c = run_scenario(small(6));
  CHECK(c.events != a.events);
}

TEST_CASE("fallback seed applies only without a configured seed")
{
  auto cfg = small(9);
  CHECK(run_scenario(cfg, 77).seed == 9);
  cfg.seed.reset();
  CHECK(run_scenario(cfg, 77).seed == 77);
}

TEST_CASE("log-recomputed metrics equal the engine's")
{
  for (auto decider : {handover::DeciderKind::crisp, handover::DeciderKind::fuzzy})
    {
      ScenarioConfig cfg;
      cfg.seed = 3;
      cfg.handover.decider = decider;
      cfg.access.default_open = false;
      cfg.access.grant_delay_s = 1.0;
      const auto r = run_scenario(cfg);
      const auto m = summarize_metrics(r.events, summary_context(cfg));
      CHECK(m == r.metrics);
      CHECK(r.metrics.per_ue.size() == 20);
    }
}

TEST_CASE("event log invariants")
{
  const auto cfg = small(11, 30.0);
  const auto r = run_scenario(cfg);
  const auto ticks = static_cast<std::size_t>(std::llround(cfg.sim_time_s / cfg.dt_s));
  std::size_t measures = 0;
  double last = 0.0;
  for (const auto& e : r.events)
    {
      REQUIRE(e.t_s >= last);
      last = e.t_s;
      REQUIRE(to_int(e.ue) >= 0);
      REQUIRE(to_int(e.ue) < cfg.n_ues);
      if (e.event == EventKind::measure)
        {
          ++measures;
          REQUIRE(e.sinr_serving_db.has_value());
        }
      if (e.event == EventKind::handover_exec)
        {
          REQUIRE(e.target.has_value());
          REQUIRE(e.target->id != e.serving.id);
        }
    }
  CHECK(measures == ticks * static_cast<std::size_t>(cfg.n_ues));

  UeMetrics sum;
  for (const auto& u : r.metrics.per_ue)
    {
      sum.add(u);
      CHECK(u.time_in_microcell() >= 0.0);
      CHECK(u.time_in_microcell() <= 1.0);
      CHECK(u.mean_throughput_mbps() >= 0.0);
    }
  CHECK(sum == r.metrics.aggregate());
}

TEST_CASE("summarize_metrics examples")
{
  const SummaryContext ctx;
  CHECK(summarize_metrics({}, ctx).per_ue.empty());
  CHECK(summarize_metrics({}, ctx).aggregate() == UeMetrics{});

  const std::vector<EventRecord> three{exec_event(1, 0, 0, 1), exec_event(20, 0, 1, 2), exec_event(40, 1, 0, 3)};
  const auto m = summarize_metrics(three, ctx);
  CHECK(m.aggregate().handover_total() == 3);
  CHECK(m.aggregate().handovers_of(handover::Scenario::macro_macro) == 3);
  CHECK(m.per_ue.size() == 2);

  const std::vector<EventRecord> back{exec_event(10, 0, 0, 1), exec_event(12, 0, 1, 0)};
  CHECK(summarize_metrics(back, ctx).aggregate().pingpong == 1);

  const std::vector<EventRecord> unordered{exec_event(5, 0, 0, 1), exec_event(4, 0, 1, 2)};
  CHECK_THROWS_AS(summarize_metrics(unordered, ctx), Error);
}

TEST_CASE("default scenario hands over on every seed")
{
  std::vector<ScenarioConfig> configs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
      ScenarioConfig cfg;
      cfg.seed = seed;
      configs.push_back(cfg);
    }
  const auto results = run_sweep(configs);
  REQUIRE(results.size() == 10);
  for (std::size_t i = 0; i < results.size(); ++i)
    {
      CHECK(results[i].seed == i + 1);
      CHECK(results[i].metrics.aggregate().handover_total() >= 1);
    }
}

TEST_CASE("sweep results equal sequential runs")
{
  std::vector<ScenarioConfig> configs{small(1), small(2)};
  const auto results = run_sweep(configs);
  CHECK(results[0].events == run_scenario(configs[0]).events);
  CHECK(results[1].events == run_scenario(configs[1]).events);
}

TEST_CASE("closed microcells are entered only after a grant")
{
  ScenarioConfig cfg;
  cfg.seed = 4;
  cfg.access.default_open = false;
  cfg.access.auto_grant = true;
  cfg.access.grant_delay_s = 2.0;
  const auto r = run_scenario(cfg);
  std::set<CellId> closed;
  for (int id = cfg.n_macro; id < cfg.n_macro * (1 + cfg.micro_per_cell); ++id)
    {
      closed.insert(CellId{id});
    }
  const auto a = audit::audit_closed_entries(r.events, closed);
  CHECK(a.entries > 0);
  CHECK_MESSAGE(a.violations == 0, a.first_violation);
  CHECK(r.metrics.aggregate().temp_requests > 0);
}

TEST_CASE("without auto-grant no closed cell is ever entered")
{
  ScenarioConfig cfg;
  cfg.seed = 4;
  cfg.access.default_open = false;
  cfg.access.auto_grant = false;
  const auto r = run_scenario(cfg);
  for (const auto& e : r.events)
    {
      if (e.event == EventKind::handover_exec)
        {
          REQUIRE(e.target->kind == CellKind::macro_enb);
        }
      REQUIRE(e.event != EventKind::temp_grant);
    }
}

TEST_CASE("pre-authorized users enter closed cells without asking")
{
  ScenarioConfig cfg;
  cfg.seed = 4;
  cfg.access.default_open = false;
  cfg.access.auto_grant = false;
  std::set<std::string> everyone;
  for (int i = 0; i < cfg.n_ues; ++i)
    {
      everyone.insert("ue" + std::to_string(i));
    }
  for (int id = cfg.n_macro; id < cfg.n_macro * (1 + cfg.micro_per_cell); ++id)
    {
      cfg.access.users[CellId{id}] = everyone;
    }
  const auto r = run_scenario(cfg);
  CHECK(r.metrics.aggregate().temp_requests == 0);
}

TEST_CASE("config validation")
{
  auto bad = [](auto mutate) {
    ScenarioConfig cfg;
    mutate(cfg);
    return cfg;
  };
  CHECK_NOTHROW(ScenarioConfig{}.validate());
  CHECK_THROWS_AS(bad([](ScenarioConfig& c) { c.sim_time_s = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](ScenarioConfig& c) { c.dt_s = -1; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](ScenarioConfig& c) { c.dt_s = 200; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](ScenarioConfig& c) { c.n_macro = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](ScenarioConfig& c) { c.n_ues = -1; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](ScenarioConfig& c) { c.radio.cell_radius_m = -5; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](ScenarioConfig& c) { c.access.closed_cells = {CellId{0}}; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](ScenarioConfig& c) { c.fuzzy_rules = "if nonsense"; }).validate(), ConfigError);
  CHECK_THROWS_AS(run_scenario(bad([](ScenarioConfig& c) { c.sim_time_s = -1; })), ConfigError);
}

TEST_CASE("access policy defaults")
{
  AccessPolicy p;
  CHECK_FALSE(p.is_closed(CellId{5}));
  p.closed_cells.insert(CellId{5});
  CHECK(p.is_closed(CellId{5}));
  CHECK(p.owner_of(CellId{5}) == "owner5");
  p.owners[CellId{5}] = "alice";
  CHECK(p.owner_of(CellId{5}) == "alice");
  p.grant_delay_s = 3;
  p.grant_delay_per_cell[CellId{6}] = 1;
  CHECK(p.grant_delay_for(CellId{5}) == 3);
  CHECK(p.grant_delay_for(CellId{6}) == 1);
  p.default_open = false;
  CHECK(p.is_closed(CellId{7}));
}
