#include <lteu/engine.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

namespace lteu::engine {

double
RadioParams::effective_noise_dbm() const
{
  return noise_dbm.value_or(radio::thermal_noise_dbm(bandwidth_mhz * 1e6));
}

bool
AccessPolicy::is_closed(CellId cell) const
{
  return closed_cells.contains(cell) || !default_open;
}

std::string
AccessPolicy::owner_of(CellId cell) const
{
  auto it = owners.find(cell);
  return it != owners.end() ? it->second : "owner" + std::to_string(to_int(cell));
}

bool
AccessPolicy::auto_grant_for(CellId cell) const
{
  auto it = auto_grant_per_cell.find(cell);
  return it != auto_grant_per_cell.end() ? it->second : auto_grant;
}

double
AccessPolicy::grant_delay_for(CellId cell) const
{
  auto it = grant_delay_per_cell.find(cell);
  return it != grant_delay_per_cell.end() ? it->second : grant_delay_s;
}

void
ScenarioConfig::validate() const
{
  if (!(sim_time_s > 0.0))
    {
      throw ConfigError("[general] sim_time_s must be positive");
    }
  if (!(dt_s > 0.0) || dt_s > sim_time_s)
    {
      throw ConfigError("[general] dt_s must be positive and no larger than sim_time_s");
    }
  if (n_macro < 1)
    {
      throw ConfigError("[general] n_macro must be at least 1");
    }
  if (micro_per_cell < 0 || n_ues < 0)
    {
      throw ConfigError("[general] micro_per_cell and n_ues must be nonnegative");
    }
  if (!(radio.cell_radius_m > 0.0) || !(radio.bandwidth_mhz > 0.0))
    {
      throw ConfigError("[radio] cell_radius_m and bandwidth_mhz must be positive");
    }
  if (radio.macro_shadow_std_db < 0.0 || radio.micro_shadow_std_db < 0.0)
    {
      throw ConfigError("[radio] shadowing standard deviations must be nonnegative");
    }
  if (mobility.speed_min_kmh < 0.0 || mobility.speed_max_kmh < mobility.speed_min_kmh)
    {
      throw ConfigError("[radio] need 0 <= ue_speed_min_kmh <= ue_speed_max_kmh");
    }
  if (handover.hhm_db < 0.0)
    {
      throw ConfigError("[handover] hhm_db must be nonnegative");
    }
  if (handover.pingpong_window_s < 0.0 || handover.prediction_horizon_s < 0.0)
    {
      throw ConfigError("[handover] pingpong_window_s and prediction_horizon_s must be nonnegative");
    }
  const int first_micro = n_macro;
  const int end_micro = n_macro + n_macro * micro_per_cell;
  for (CellId c : access.closed_cells)
    {
      if (to_int(c) < first_micro || to_int(c) >= end_micro)
        {
          throw ConfigError("[auth] closed cell " + std::to_string(to_int(c)) + " is not a microcell id");
        }
    }
  if (access.grant_delay_s < 0.0)
    {
      throw ConfigError("[auth] grant_delay_s must be nonnegative");
    }
  build_rule_base(*this);
}

fuzzy::RuleBase
build_rule_base(const ScenarioConfig& cfg)
{
  auto inputs = fuzzy::default_input_variables();
  auto output = fuzzy::default_output_variable();
  for (const auto& o : cfg.fuzzy_terms)
    {
      if (o.variable == output.name())
        {
          output.set_term(o.term, o.shape);
          continue;
        }
      auto it = std::find_if(inputs.begin(), inputs.end(), [&](const auto& v) { return v.name() == o.variable; });
      if (it == inputs.end())
        {
          throw ConfigError("[fuzzy_terms] unknown variable '" + o.variable + "'");
        }
      it->set_term(o.term, o.shape);
    }
  try
    {
      return fuzzy::RuleBase::from_text(std::move(inputs), std::move(output),
                                        cfg.fuzzy_rules.empty() ? fuzzy::kDefaultRuleText : cfg.fuzzy_rules,
                                        cfg.fuzzy_resolution);
    }
  catch (const ParseError& e)
    {
      throw ConfigError(std::string("[fuzzy_rules] ") + e.what());
    }
}

const char*
to_string(EventKind kind)
{
  switch (kind)
    {
    case EventKind::measure:
      return "measure";
    case EventKind::decide:
      return "decide";
    case EventKind::handover_exec:
      return "handover_exec";
    case EventKind::temp_request:
      return "temp_request";
    case EventKind::temp_grant:
      return "temp_grant";
    }
  return "?";
}

namespace {

// Independent RNG streams derived from the scenario seed.
enum class Stream : std::uint32_t { placement = 1, ue_init = 2, mobility = 3, shadowing = 4 };

radio::Rng
make_stream(std::uint64_t seed, Stream stream)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return radio::Rng(seq);
}

struct PendingGrant
{
  double due_s;
  int gateway;
  CellId cell;
  std::size_t ue;
};

std::string
user_name(std::size_t ue)
{
  return "ue" + std::to_string(ue);
}

class Simulation
{
public:
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      seed_(seed),
      rule_base_(build_rule_base(cfg)),
      grid_(topology::HexGrid::build(cfg.n_macro, cfg.radio.cell_radius_m, cfg.radio.macro_tx_dbm)),
      mobility_rng_(make_stream(seed, Stream::mobility)),
      shadow_rng_(make_stream(seed, Stream::shadowing)),
      noise_mw_(radio::db_to_linear(cfg.radio.effective_noise_dbm()))
  {
    auto placement_rng = make_stream(seed, Stream::placement);
    cells_ = grid_.macro_sites();
    auto micros = topology::place_microcells(grid_, cfg.micro_per_cell, placement_rng, cfg.radio.micro_tx_dbm);
    cells_.insert(cells_.end(), micros.begin(), micros.end());

    for (int g = 0; g < cfg.n_macro; ++g)
      {
        registries_.emplace_back(g);
      }
    for (const auto& cell : cells_)
      {
        if (cell.kind != CellKind::lteu_microcell)
          {
            continue;
          }
        auto& reg = registries_.at(static_cast<std::size_t>(*cell.gateway_id));
        if (cfg.access.is_closed(cell.id))
          {
            auto users = cfg.access.users.contains(cell.id) ? cfg.access.users.at(cell.id) : std::set<std::string>{};
            reg.register_microcell(cell.id, cfg.access.owner_of(cell.id), users);
          }
        else
          {
            reg.register_open_microcell(cell.id, "operator");
          }
      }

    auto init_rng = make_stream(seed, Stream::ue_init);
    const auto& box = grid_.bounds();
    for (int i = 0; i < cfg.n_ues; ++i)
      {
        topology::UeState ue;
        ue.id = UeId{i};
        ue.position = {std::uniform_real_distribution<double>(box.min.x, box.max.x)(init_rng),
                       std::uniform_real_distribution<double>(box.min.y, box.max.y)(init_rng)};
        topology::retarget(ue, box, cfg.mobility, init_rng);
        ue.traffic = std::bernoulli_distribution(0.5)(init_rng) ? TrafficClass::real_time
                                                                : TrafficClass::non_real_time;
        ue.battery_hours = std::uniform_real_distribution<double>(0.5, 10.0)(init_rng);
        ue.serving = strongest_macro(ue.position);
        ues_.push_back(ue);

        handover::UeSessionState session;
        session.serving = ue.serving;
        sessions_.push_back(session);
      }
    last_decision_.resize(ues_.size());
    metrics_.per_ue.resize(ues_.size());
    rx_.resize(cells_.size());
    sinr_.resize(cells_.size());
  }

  RunResult run()
  {
    const auto ticks = static_cast<std::int64_t>(std::llround(cfg_.sim_time_s / cfg_.dt_s));
    for (std::int64_t k = 1; k <= ticks; ++k)
      {
        tick(static_cast<double>(k) * cfg_.dt_s);
      }
    for (std::size_t i = 0; i < ues_.size(); ++i)
      {
        for (auto& reg : registries_)
          {
            reg.end_session(static_cast<auth::SessionId>(i));
          }
      }
    return RunResult{std::move(events_), std::move(metrics_), seed_};
  }

private:
  CellId strongest_macro(Vec2 p) const
  {
    CellId best = cells_.front().id;
    double best_rx = -1e300;
    for (const auto& c : grid_.macro_sites())
      {
        const double rx = c.tx.tx_power_dbm - cfg_.radio.macro_path_loss.loss_db(std::max(distance(p, c.position), 1.0));
        if (rx > best_rx)
          {
            best_rx = rx;
            best = c.id;
          }
      }
    return best;
  }

  const topology::CellSite& cell(CellId id) const { return cells_.at(static_cast<std::size_t>(to_int(id))); }
  CellRef ref(CellId id) const { return CellRef{id, cell(id).kind}; }

  void tick(double t)
  {
    for (auto& ue : ues_)
      {
        ue = topology::step_ue(ue, cfg_.dt_s, grid_.bounds(), cfg_.mobility, mobility_rng_);
        ue.battery_hours = std::max(0.0, ue.battery_hours - cfg_.dt_s / 3600.0);
      }

    std::vector<double> load(cells_.size(), 0.0);
    for (const auto& ue : ues_)
      {
        load[static_cast<std::size_t>(to_int(ue.serving))] += cfg_.radio.per_ue_load_mbps;
      }

    for (std::size_t i = 0; i < ues_.size(); ++i)
      {
        measure(ues_[i]);
        process_ue(i, t, load);
      }
    process_grants(t);
  }

  // Fills rx_ and sinr_ for one UE. Interference comes only from sites of the
  // same kind, which share a carrier.
  void measure(const topology::UeState& ue)
  {
    double total_mw[2] = {0.0, 0.0};
    for (std::size_t c = 0; c < cells_.size(); ++c)
      {
        const auto& site = cells_[c];
        const bool macro = site.kind == CellKind::macro_enb;
        const double shadow =
          radio::shadowing_db(shadow_rng_, macro ? cfg_.radio.macro_shadow_std_db : cfg_.radio.micro_shadow_std_db);
        const double d = std::max(distance(ue.position, site.position), 1.0);
        const auto& model = macro ? cfg_.radio.macro_path_loss : cfg_.radio.micro_path_loss;
        rx_[c] = radio::link_budget(site.tx, d, shadow, model).rx_dbm;
        total_mw[macro ? 0 : 1] += radio::db_to_linear(rx_[c]);
      }
    for (std::size_t c = 0; c < cells_.size(); ++c)
      {
        const double s = radio::db_to_linear(rx_[c]);
        const double others = total_mw[cells_[c].kind == CellKind::macro_enb ? 0 : 1] - s;
        sinr_[c] = radio::linear_to_db(s / (std::max(others, 0.0) + noise_mw_));
      }
  }

  bool authorized(CellId id, std::size_t ue, double t) const
  {
    const auto& site = cell(id);
    if (site.kind != CellKind::lteu_microcell)
      {
        return true;
      }
    return registries_.at(static_cast<std::size_t>(*site.gateway_id)).check_access(id, user_name(ue), t);
  }

  void emit(EventRecord e) { events_.push_back(std::move(e)); }

  void process_ue(std::size_t i, double t, const std::vector<double>& load)
  {
    auto& ue = ues_[i];
    auto& um = metrics_.per_ue[i];
    const auto serving_idx = static_cast<std::size_t>(to_int(ue.serving));
    const double serving_sinr = sinr_[serving_idx];

    EventRecord m{t, ue.id, EventKind::measure, ref(ue.serving), std::nullopt, serving_sinr,
                  std::nullopt, std::nullopt, std::nullopt};
    emit(m);
    um.throughput_sum_mbps += radio::shannon_throughput_mbps(serving_sinr, cfg_.radio.bandwidth_mhz);
    ++um.samples;
    if (cell(ue.serving).kind == CellKind::lteu_microcell)
      {
        ++um.micro_samples;
      }

    handover::Measurement meas;
    meas.serving = {ue.serving, cell(ue.serving).kind, serving_sinr};
    meas.ue_position = ue.position;
    meas.ue_velocity_kmh = ue.velocity_kmh;
    meas.speed_kmh = ue.speed_kmh;
    meas.traffic = ue.traffic;
    meas.battery_hours = ue.battery_hours;
    meas.candidates.reserve(cells_.size() - 1);
    for (std::size_t c = 0; c < cells_.size(); ++c)
      {
        if (c == serving_idx)
          {
            continue;
          }
        const auto& site = cells_[c];
        meas.candidates.push_back(handover::CandidateMeasurement{
          site.id, site.kind, sinr_[c], rx_[c], load[c], authorized(site.id, i, t), site.position});
      }

    const handover::HandoverDecision decision =
      cfg_.handover.decider == handover::DeciderKind::fuzzy
        ? handover::evaluate_fuzzy_handover(meas, rule_base_, cfg_.handover, cfg_.latency)
        : handover::evaluate_crisp_handover(meas, cfg_.handover);

    if (decision.verdict != handover::Verdict::none && decision != last_decision_[i])
      {
        emit(EventRecord{t, ue.id, EventKind::decide, ref(ue.serving), ref(*decision.target), serving_sinr,
                         sinr_[static_cast<std::size_t>(to_int(*decision.target))], decision.decision_value,
                         decision.verdict});
      }
    last_decision_[i] = decision;

    if (decision.verdict == handover::Verdict::request_temp_access)
      {
        request_access(i, *decision.target, t);
      }

    auto rx_of = [&](CellId id) -> std::optional<double> {
      if (!authorized(id, i, t))
        {
          return std::nullopt;
        }
      return rx_[static_cast<std::size_t>(to_int(id))];
    };
    auto step = handover::advance_session(sessions_[i], decision, rx_of, t, cfg_.handover);
    sessions_[i] = step.state;
    if (step.executed)
      {
        const auto& ex = *step.executed;
        emit(EventRecord{t, ue.id, EventKind::handover_exec, ref(ex.from), ref(ex.to),
                         sinr_[static_cast<std::size_t>(to_int(ex.from))],
                         sinr_[static_cast<std::size_t>(to_int(ex.to))], std::nullopt, ex.cause});
        ++um.handovers[static_cast<std::size_t>(handover::scenario_between(cell(ex.from).kind, cell(ex.to).kind))];
        if (ex.pingpong)
          {
            ++um.pingpong;
          }
        ue.serving = ex.to;
      }
  }

  void request_access(std::size_t i, CellId target, double t)
  {
    const auto& site = cell(target);
    auto& reg = registries_.at(static_cast<std::size_t>(*site.gateway_id));
    const auth::UserId user = user_name(i);
    if (reg.check_access(target, user, t) || reg.has_pending_request(target, user))
      {
        return;
      }
    reg.request_temp_access(target, user, static_cast<auth::SessionId>(i), t);
    emit(EventRecord{t, ues_[i].id, EventKind::temp_request, ref(ues_[i].serving), ref(target),
                     std::nullopt, std::nullopt, std::nullopt, handover::Verdict::request_temp_access});
    ++metrics_.per_ue[i].temp_requests;
    if (cfg_.access.auto_grant_for(target))
      {
        grants_.push_back(PendingGrant{t + cfg_.access.grant_delay_for(target), *site.gateway_id, target, i});
      }
  }

  void process_grants(double t)
  {
    // Grants land after this tick's decisions so a handover into the cell
    // can only happen on a later tick.
    const double eps = cfg_.dt_s * 1e-6;
    std::vector<PendingGrant> later;
    for (const auto& g : grants_)
      {
        if (g.due_s > t + eps)
          {
            later.push_back(g);
            continue;
          }
        auto& reg = registries_.at(static_cast<std::size_t>(g.gateway));
        const auth::UserId user = user_name(g.ue);
        if (!reg.has_pending_request(g.cell, user))
          {
            continue;
          }
        reg.grant_temp_access(g.cell, cfg_.access.owner_of(g.cell), user, t);
        emit(EventRecord{t, ues_[g.ue].id, EventKind::temp_grant, ref(ues_[g.ue].serving), ref(g.cell),
                         std::nullopt, std::nullopt, std::nullopt, std::nullopt});
        ++metrics_.per_ue[g.ue].temp_grants;
      }
    grants_ = std::move(later);
  }

  const ScenarioConfig& cfg_;
  std::uint64_t seed_;
  fuzzy::RuleBase rule_base_;
  topology::HexGrid grid_;
  std::vector<topology::CellSite> cells_;
  std::vector<auth::GatewayRegistry> registries_;
  std::vector<topology::UeState> ues_;
  std::vector<handover::UeSessionState> sessions_;
  std::vector<handover::HandoverDecision> last_decision_;
  std::vector<PendingGrant> grants_;
  radio::Rng mobility_rng_;
  radio::Rng shadow_rng_;
  double noise_mw_;
  std::vector<double> rx_;
  std::vector<double> sinr_;
  std::vector<EventRecord> events_;
  Metrics metrics_;
};

} // namespace

RunResult
run_scenario(const ScenarioConfig& cfg, std::uint64_t fallback_seed)
{
  cfg.validate();
  return Simulation(cfg, cfg.seed_or(fallback_seed)).run();
}

std::vector<RunResult>
run_sweep(std::span<const ScenarioConfig> configs)
{
  std::vector<std::future<RunResult>> jobs;
  jobs.reserve(configs.size());
  for (const auto& cfg : configs)
    {
      jobs.push_back(std::async(std::launch::async, [&cfg] { return run_scenario(cfg); }));
    }
  std::vector<RunResult> out;
  out.reserve(jobs.size());
  for (auto& job : jobs)
    {
      out.push_back(job.get());
    }
  return out;
}

} // namespace lteu::engine
