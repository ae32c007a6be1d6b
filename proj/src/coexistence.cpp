#include <lteu/coexistence.hpp>

#include <algorithm>
#include <cmath>
#include <future>

namespace lteu::coexist {

const char*
to_string(AccessMode mode)
{
  switch (mode)
    {
    case AccessMode::greedy:
      return "greedy";
    case AccessMode::lbt:
      return "lbt";
    case AccessMode::abs:
      return "abs";
    }
  return "?";
}

const char*
to_string(Tech tech)
{
  switch (tech)
    {
    case Tech::lteu_gw:
      return "lteu_gw";
    case Tech::lteu_ue_ul:
      return "lteu_ue_ul";
    case Tech::wifi:
      return "wifi";
    }
  return "?";
}

AccessMode
parse_mode(std::string_view text)
{
  for (auto m : {AccessMode::greedy, AccessMode::lbt, AccessMode::abs})
    {
      if (text == to_string(m))
        {
          return m;
        }
    }
  throw ConfigError("unknown coexistence mode '" + std::string(text) + "'");
}

Tech
parse_tech(std::string_view text)
{
  for (auto t : {Tech::lteu_gw, Tech::lteu_ue_ul, Tech::wifi})
    {
      if (text == to_string(t))
        {
          return t;
        }
    }
  throw ConfigError("unknown node technology '" + std::string(text) + "'");
}

namespace {

bool
is_pow2_minus_one(int v)
{
  const unsigned u = static_cast<unsigned>(v) + 1u;
  return v >= 0 && (u & (u - 1u)) == 0u;
}

} // namespace

void
CoexistConfig::validate() const
{
  if (n_slots <= 0)
    {
      throw ConfigError("n_slots must be positive");
    }
  if (!(abs_ratio >= 0.0 && abs_ratio <= 1.0))
    {
      throw ConfigError("abs_ratio must lie in [0,1]");
    }
  if (cca_slots < 1)
    {
      throw ConfigError("cca_slots must be at least 1");
    }
  if (ul_lookahead_slots < 0)
    {
      throw ConfigError("ul_lookahead_slots must be nonnegative");
    }
  if (cw_min > cw_max || !is_pow2_minus_one(cw_min) || !is_pow2_minus_one(cw_max))
    {
      throw ConfigError("cw_min <= cw_max required, both a power of two minus one");
    }
  if (wifi_packet_slots < 1 || lteu_burst_slots < 1)
    {
      throw ConfigError("packet and burst lengths must be at least one slot");
    }
  if (lbt_ecca_max < 0)
    {
      throw ConfigError("lbt_ecca_max must be nonnegative");
    }
  if (ul_grant_period_slots < 1)
    {
      throw ConfigError("ul_grant_period_slots must be at least 1");
    }
  if (nodes.empty())
    {
      throw ConfigError("coexistence run needs at least one node");
    }
}

Action
lbt_decide(std::span<const SlotOutcome> history, int cca_slots, std::optional<int> ignore_owner)
{
  const std::size_t window = std::min(history.size(), static_cast<std::size_t>(std::max(cca_slots, 0)));
  for (const auto& s : history.last(window))
    {
      if (s.kind == SlotOutcome::Kind::idle)
        {
          continue;
        }
      if (s.kind == SlotOutcome::Kind::busy && ignore_owner && s.owner == *ignore_owner)
        {
          continue;
        }
      return Action::defer;
    }
  return Action::transmit;
}

bool
abs_muted(double abs_ratio, std::int64_t slot)
{
  const auto muted = static_cast<std::int64_t>(std::lround(10.0 * abs_ratio));
  return slot % 10 < muted;
}

UplinkGrant
lbt_uplink_grant(int gateway, int ue, std::int64_t slot, int lookahead_slots)
{
  return UplinkGrant{gateway, ue, slot, slot + std::max(lookahead_slots, 0)};
}

UplinkOutcome
sense_uplink(const UplinkGrant& grant, std::span<const SlotOutcome> history, int cca_slots)
{
  const auto upto = std::min<std::size_t>(history.size(), static_cast<std::size_t>(grant.scheduled_slot));
  return lbt_decide(history.first(upto), cca_slots, grant.gateway) == Action::transmit ? UplinkOutcome::transmit
                                                                                         : UplinkOutcome::refrain;
}

DcfNode::DcfNode(int id, const CoexistConfig& cfg, Rng& rng)
  : id_(id),
    cw_min_(cfg.cw_min),
    cw_max_(cfg.cw_max),
    packet_slots_(cfg.wifi_packet_slots),
    rts_cts_(cfg.wifi_rts_cts),
    cw_(cfg.cw_min)
{
  backoff_ = std::uniform_int_distribution<int>(0, cw_)(rng);
}

Action
DcfNode::decide(const ChannelState& channel, std::int64_t slot) const
{
  if (tx_remaining_ > 0)
    {
      return Action::transmit;
    }
  if (channel.reserved_against(id_, slot))
    {
      return Action::defer;
    }
  return backoff_ == 0 ? Action::transmit : Action::defer;
}

void
DcfNode::on_slot(std::int64_t slot, const SlotOutcome& outcome, bool transmitted, ChannelState& channel, Rng& rng)
{
  if (!transmitted)
    {
      if (outcome.kind == SlotOutcome::Kind::idle && backoff_ > 0)
        {
          --backoff_;
        }
      return;
    }

  const bool starting = tx_remaining_ == 0;
  if (starting)
    {
      tx_remaining_ = packet_slots_;
      collided_ = false;
    }
  if (outcome.kind == SlotOutcome::Kind::collision)
    {
      collided_ = true;
    }
  --tx_remaining_;

  if (starting && rts_cts_)
    {
      if (collided_)
        {
          tx_remaining_ = 0; // RTS lost: the data never goes out
        }
      else
        {
          channel.reservation = Reservation{id_, slot + packet_slots_ - 1};
        }
    }

  if (tx_remaining_ == 0)
    {
      cw_ = collided_ ? std::min(2 * cw_ + 1, cw_max_) : cw_min_;
      backoff_ = std::uniform_int_distribution<int>(0, cw_)(rng);
    }
}

Action
dcf_step(const DcfNode& node, const ChannelState& channel, std::int64_t slot)
{
  return node.decide(channel, slot);
}

double
CoexistResult::utilization() const
{
  std::int64_t won = 0;
  for (const auto& n : nodes)
    {
      won += n.slots_won;
    }
  return n_slots > 0 ? static_cast<double>(won) / static_cast<double>(n_slots) : 0.0;
}

std::int64_t
CoexistResult::slots_won(Tech tech) const
{
  std::int64_t won = 0;
  for (const auto& n : nodes)
    {
      if (n.tech == tech)
        {
          won += n.slots_won;
        }
    }
  return won;
}

namespace {

struct Gateway
{
  int id = 0;
  int burst_remaining = 0;
  int ecca = 0;
};

struct Uplink
{
  int id = 0;
  int gateway = -1;
  std::deque<UplinkGrant> grants;
  bool transmitting = false;
};

} // namespace

CoexistResult
run_coexistence(const CoexistConfig& cfg, std::uint64_t seed)
{
  cfg.validate();
  Rng rng(seed);

  std::vector<DcfNode> wifi;
  std::vector<Gateway> gateways;
  std::vector<Uplink> uplinks;
  int first_gateway = -1;
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i)
    {
      if (cfg.nodes[i] == Tech::lteu_gw && first_gateway < 0)
        {
          first_gateway = static_cast<int>(i);
        }
    }
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i)
    {
      const int id = static_cast<int>(i);
      switch (cfg.nodes[i])
        {
        case Tech::wifi:
          wifi.emplace_back(id, cfg, rng);
          break;
        case Tech::lteu_gw: {
          Gateway gw{id, 0, 0};
          if (cfg.mode == AccessMode::lbt)
            {
              gw.ecca = std::uniform_int_distribution<int>(0, cfg.lbt_ecca_max)(rng);
            }
          gateways.push_back(gw);
          break;
        }
        case Tech::lteu_ue_ul:
          uplinks.push_back(Uplink{id, first_gateway, {}, false});
          break;
        }
    }

  CoexistResult result;
  result.n_slots = cfg.n_slots;
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i)
    {
      result.nodes.push_back(NodeResult{static_cast<int>(i), cfg.nodes[i], 0, 0});
    }

  ChannelState channel;
  channel.history.reserve(static_cast<std::size_t>(cfg.n_slots));
  std::vector<int> transmitters;
  std::vector<char> tx_flag(cfg.nodes.size(), 0);

  for (std::int64_t slot = 0; slot < cfg.n_slots; ++slot)
    {
      if (channel.reservation && slot > channel.reservation->until_slot)
        {
          channel.reservation.reset();
        }
      const bool muted = cfg.mode == AccessMode::abs && abs_muted(cfg.abs_ratio, slot);

      if (slot % cfg.ul_grant_period_slots == 0)
        {
          for (auto& ul : uplinks)
            {
              ul.grants.push_back(lbt_uplink_grant(ul.gateway, ul.id, slot, cfg.ul_lookahead_slots));
            }
        }

      transmitters.clear();
      std::fill(tx_flag.begin(), tx_flag.end(), 0);
      auto transmit = [&](int id) {
        transmitters.push_back(id);
        tx_flag[static_cast<std::size_t>(id)] = 1;
      };

      // Subframes granted to a cell's uplink are left free by its gateway.
      std::vector<int> ul_busy_gateways;
      for (auto& ul : uplinks)
        {
          ul.transmitting = false;
          if (ul.grants.empty() || ul.grants.front().scheduled_slot != slot)
            {
              continue;
            }
          const UplinkGrant grant = ul.grants.front();
          ul.grants.pop_front();
          ul_busy_gateways.push_back(ul.gateway);

          bool go = !muted && !channel.reserved_against(ul.id, slot);
          if (go && cfg.mode == AccessMode::lbt)
            {
              go = sense_uplink(grant, channel.history, cfg.cca_slots) == UplinkOutcome::transmit;
            }
          if (go)
            {
              ul.transmitting = true;
              transmit(ul.id);
            }
          else
            {
              ++result.nodes[static_cast<std::size_t>(ul.id)].rescheduled;
            }
        }

      for (auto& gw : gateways)
        {
          if (muted || channel.reserved_against(gw.id, slot)
              || std::find(ul_busy_gateways.begin(), ul_busy_gateways.end(), gw.id) != ul_busy_gateways.end())
            {
              continue;
            }
          if (cfg.mode != AccessMode::lbt)
            {
              transmit(gw.id);
            }
          else if (gw.burst_remaining > 0
                   || (gw.ecca == 0 && lbt_decide(channel.history, cfg.cca_slots) == Action::transmit))
            {
              transmit(gw.id);
            }
        }

      for (const auto& node : wifi)
        {
          if (node.decide(channel, slot) == Action::transmit)
            {
              transmit(node.id());
            }
        }

      SlotOutcome outcome;
      if (transmitters.size() == 1)
        {
          outcome = SlotOutcome::busy(transmitters.front());
          ++result.nodes[static_cast<std::size_t>(transmitters.front())].slots_won;
        }
      else if (transmitters.size() > 1)
        {
          outcome = SlotOutcome::collision();
          ++result.collision_slots;
        }
      else
        {
          ++result.idle_slots;
        }
      channel.history.push_back(outcome);

      for (auto& gw : gateways)
        {
          if (cfg.mode != AccessMode::lbt)
            {
              continue;
            }
          if (tx_flag[static_cast<std::size_t>(gw.id)])
            {
              if (gw.burst_remaining == 0)
                {
                  gw.burst_remaining = cfg.lteu_burst_slots;
                }
              if (--gw.burst_remaining == 0)
                {
                  gw.ecca = std::uniform_int_distribution<int>(0, cfg.lbt_ecca_max)(rng);
                }
            }
          else if (gw.ecca > 0 && outcome.kind == SlotOutcome::Kind::idle
                   && lbt_decide(channel.history, cfg.cca_slots) == Action::transmit)
            {
              --gw.ecca;
            }
        }
      for (auto& node : wifi)
        {
          node.on_slot(slot, outcome, tx_flag[static_cast<std::size_t>(node.id())] != 0, channel, rng);
        }
    }
  return result;
}

std::vector<CoexistRow>
coexist_sweep(const CoexistConfig& cfg, std::span<const std::uint64_t> seeds)
{
  cfg.validate();
  std::vector<std::future<std::vector<CoexistRow>>> jobs;
  for (const std::uint64_t seed : seeds)
    {
      jobs.push_back(std::async(std::launch::async, [cfg, seed] {
        const CoexistResult shared = run_coexistence(cfg, seed);
        std::vector<CoexistRow> rows;
        for (const auto& node : shared.nodes)
          {
            CoexistConfig alone = cfg;
            alone.nodes = {node.tech};
            const CoexistResult standalone = run_coexistence(alone, seed);
            rows.push_back(CoexistRow{cfg.mode, seed, node.id, node.tech, node.slots_won,
                                      standalone.nodes.front().slots_won, shared.utilization()});
          }
        return rows;
      }));
    }
  std::vector<CoexistRow> out;
  for (auto& job : jobs)
    {
      auto rows = job.get();
      out.insert(out.end(), rows.begin(), rows.end());
    }
  return out;
}

} // namespace lteu::coexist
