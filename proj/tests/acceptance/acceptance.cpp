// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails or exceeds its time budget.

#include <lteu/coexistence.hpp>
#include <lteu/engine.hpp>
#include <lteu/events_csv.hpp>
#include <lteu/fuzzy.hpp>
#include <lteu/handoff_rules.hpp>
#include <lteu/radio.hpp>
#include <lteu/scenario.hpp>

#include "../support/audit.hpp"
#include "../support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace lteu;

namespace {

struct Verdict
{
  bool pass = false;
  std::string detail;
};

struct Criterion
{
  int number;
  const char* name;
  double budget_s;
  std::function<Verdict()> check;
};

std::string
fmt(const char* pattern, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

Verdict
path_loss()
{
  const double pl = radio::macro_path_loss_db(1000.0);
  return {std::abs(pl - 128.1) <= 0.01, fmt("PL(1000 m) = %.6f dB", pl)};
}

Verdict
shadowing()
{
  radio::Rng rng(2024);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i)
    {
      const double s = radio::shadowing_db(rng);
      sum += s;
      sq += s * s;
    }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  return {std::abs(mean) <= 0.1 && std::abs(sd - 8.0) <= 0.2, fmt("mean %.4f dB, std %.4f dB", mean, sd)};
}

Verdict
crisp_oracle()
{
  const int points = static_cast<int>(oracle::crisp_grid().size());
  const int bad = oracle::crisp_mismatches();
  return {points == 192 && bad == 0, fmt("%d grid points, %d mismatches", points, bad)};
}

Verdict
decision_band()
{
  const auto rb = fuzzy::make_handover_rule_base();
  const fuzzy::HandoffInputs in{3.0, 5.0, true, TrafficClass::real_time, 8.0, 10.0};
  const auto advice = fuzzy::decide_handoff(rb, in, 0.5);
  return {advice.value > 0.8, fmt("decision value %.4f", advice.value)};
}

fuzzy::HandoffInputs
random_inputs(std::mt19937_64& rng)
{
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  return {u(-10, 10), u(0, 120), rng() % 2 == 0, rng() % 2 ? TrafficClass::real_time : TrafficClass::non_real_time,
          u(0, 10), u(0, 100)};
}

Verdict
fuzzy_numerics()
{
  // Symmetry: a symmetric aggregate set has its centroid at the centre.
  const auto rb = fuzzy::make_handover_rule_base();
  const int res = fuzzy::RuleBase::kDefaultResolution;
  const auto tri = fuzzy::MembershipFunction::triangle(0.2, 0.5, 0.8);
  std::vector<double> samples(static_cast<std::size_t>(res));
  for (int i = 0; i < res; ++i)
    {
      samples[static_cast<std::size_t>(i)] = std::min(0.7, tri(static_cast<double>(i) / (res - 1)));
    }
  const double sym = fuzzy::defuzzify_centroid(samples, 0.0, 1.0);
  const double sym_err = std::abs(sym - 0.5);

  const auto coarse = rb.with_resolution(101);
  const auto fine = rb.with_resolution(10001);
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k)
    {
      const auto in = random_inputs(rng);
      const double a = fuzzy::decide_handoff(coarse, in, 0.5).value;
      const double b = fuzzy::decide_handoff(fine, in, 0.5).value;
      worst = std::max(worst, std::abs(a - b));
    }
  return {sym_err <= 2.0 / res && worst <= 0.02,
          fmt("symmetry error %.2e (limit %.2e), max |101 - 10001| = %.4f", sym_err, 2.0 / res, worst)};
}

Verdict
coexistence()
{
  using namespace coexist;
  auto cfg_for = [](AccessMode mode, std::vector<Tech> nodes) {
    CoexistConfig c;
    c.mode = mode;
    c.n_slots = 10000;
    c.nodes = std::move(nodes);
    return c;
  };
  double lte_min = 1.0, wifi_greedy_max = 0.0;
  double wifi_greedy_sum = 0.0, wifi_lbt_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
      const auto lte_alone = run_coexistence(cfg_for(AccessMode::greedy, {Tech::lteu_gw}), seed).slots_won(Tech::lteu_gw);
      const auto wifi_alone = run_coexistence(cfg_for(AccessMode::greedy, {Tech::wifi}), seed).slots_won(Tech::wifi);
      const auto greedy = run_coexistence(cfg_for(AccessMode::greedy, {Tech::lteu_gw, Tech::wifi}), seed);
      const auto lbt = run_coexistence(cfg_for(AccessMode::lbt, {Tech::lteu_gw, Tech::wifi}), seed);
      const double lte_ret = double(greedy.slots_won(Tech::lteu_gw)) / double(lte_alone);
      const double wifi_ret = double(greedy.slots_won(Tech::wifi)) / double(wifi_alone);
      lte_min = std::min(lte_min, lte_ret);
      wifi_greedy_max = std::max(wifi_greedy_max, wifi_ret);
      wifi_greedy_sum += wifi_ret;
      wifi_lbt_sum += double(lbt.slots_won(Tech::wifi)) / double(wifi_alone);
    }
  // Mean retentions; greedy Wi-Fi retention may be exactly zero.
  const double greedy_mean = wifi_greedy_sum / 10.0;
  const double lbt_mean = wifi_lbt_sum / 10.0;
  return {lte_min >= 0.90 && wifi_greedy_max <= 0.30 && lbt_mean >= 2.0 * greedy_mean && lbt_mean > 0.0,
          fmt("greedy: LTE-U retention min %.3f, Wi-Fi retention max %.3f, mean %.3f; LBT Wi-Fi retention mean %.3f",
              lte_min, wifi_greedy_max, greedy_mean, lbt_mean)};
}

Verdict
hysteresis()
{
  std::vector<engine::ScenarioConfig> configs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
      for (double hhm : {0.0, 6.0})
        {
          engine::ScenarioConfig c;
          c.seed = seed;
          c.handover.hhm_db = hhm;
          configs.push_back(c);
        }
    }
  const auto results = engine::run_sweep(configs);
  int failing = 0;
  long total0 = 0, total6 = 0;
  for (std::size_t i = 0; i < results.size(); i += 2)
    {
      const int h0 = results[i].metrics.aggregate().handover_total();
      const int h6 = results[i + 1].metrics.aggregate().handover_total();
      total0 += h0;
      total6 += h6;
      failing += h0 >= h6 ? 0 : 1;
    }
  return {failing == 0, fmt("handovers HHM=0: %ld, HHM=6 dB: %ld over 10 seeds; %d seeds violate", total0, total6,
                            failing)};
}

Verdict
authorization_audit()
{
  engine::ScenarioConfig open;
  open.seed = 42;
  const auto first = engine::run_scenario(open);
  const auto busiest = audit::busiest_microcell(first.events);
  if (!busiest)
    {
      return {false, "no microcell entered in the open run"};
    }

  engine::ScenarioConfig closed = open;
  closed.access.closed_cells = {*busiest};
  closed.access.auto_grant = true;
  closed.access.grant_delay_s = 2.0;
  const auto run = engine::run_scenario(closed);
  const auto a = audit::audit_closed_entries(run.events, {*busiest});
  int requests = 0, grants = 0;
  for (const auto& e : run.events)
    {
      if (e.target && e.target->id == *busiest)
        {
          requests += e.event == engine::EventKind::temp_request ? 1 : 0;
          grants += e.event == engine::EventKind::temp_grant ? 1 : 0;
        }
    }
  std::string detail = fmt("cell %d: %d requests, %d grants, %d entries, %d violations", to_int(*busiest), requests,
                           grants, a.entries, a.violations);
  if (a.violations > 0)
    {
      detail += "; " + a.first_violation;
    }
  return {a.entries > 0 && a.violations == 0, detail};
}

Verdict
determinism()
{
  auto cfg = scenario::load_scenario_file(LTEU_SCENARIO_DIR "/default.ini");
  cfg.seed = 42;
  auto csv_of = [&] {
    std::ostringstream out;
    const auto r = engine::run_scenario(cfg);
    csv::emit_events_csv(r.events, out);
    return out.str();
  };
  const auto a = csv_of();
  const auto b = csv_of();
  return {a == b && a.size() > std::string(csv::kEventsHeader).size() + 1,
          fmt("%zu bytes, identical: %s", a.size(), a == b ? "yes" : "no")};
}

} // namespace

int
main()
{
  const std::vector<Criterion> criteria{
    {1, "path-loss exactness", 1.0, path_loss},
    {2, "shadowing statistics", 5.0, shadowing},
    {3, "crisp algorithm oracle equivalence", 1.0, crisp_oracle},
    {4, "fuzzy decision band", 1.0, decision_band},
    {5, "fuzzy numerics", 10.0, fuzzy_numerics},
    {6, "coexistence asymmetry", 30.0, coexistence},
    {7, "hysteresis effect", 60.0, hysteresis},
    {8, "authorization audit", 60.0, authorization_audit},
    {9, "determinism", 120.0, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria)
    {
      const auto start = std::chrono::steady_clock::now();
      Verdict v;
      try
        {
          v = c.check();
        }
      catch (const std::exception& e)
        {
          v = {false, std::string("exception: ") + e.what()};
        }
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const bool in_time = elapsed < c.budget_s;
      const bool pass = v.pass && in_time;
      failed += pass ? 0 : 1;
      std::printf("%s %d %s: %s; %.3f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.number, c.name,
                  v.detail.c_str(), elapsed, c.budget_s, in_time ? "" : " OVER TIME");
      std::fflush(stdout);
    }
  return failed == 0 ? 0 : 1;
}
