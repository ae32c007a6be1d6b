#pragma once

// Slotted simulator of one unlicensed carrier shared by LTE-U and Wi-Fi
// transmitters. A slot is one transmission opportunity of fixed payload; a
// slot with two or more transmitters is a collision and credits nobody.

#include <lteu/common.hpp>
#include <lteu/radio.hpp>

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lteu::coexist {

using radio::Rng;

/// greedy: LTE-U transmits in every slot; lbt: listen-before-talk; abs: greedy with muted subframes.
enum class AccessMode { greedy, lbt, abs };
enum class Tech { lteu_gw, lteu_ue_ul, wifi };

const char* to_string(AccessMode mode);
const char* to_string(Tech tech);
AccessMode parse_mode(std::string_view text);
Tech parse_tech(std::string_view text);

struct CoexistConfig
{
  std::int64_t n_slots = 10000;
  AccessMode mode = AccessMode::greedy;
  double abs_ratio = 0.0;
  bool wifi_rts_cts = false;
  int cca_slots = 1;
  int ul_lookahead_slots = 4;
  int cw_min = 15;
  int cw_max = 1023;
  int wifi_packet_slots = 8;   ///< slots per Wi-Fi packet, RTS/CTS slot included
  int lteu_burst_slots = 8;    ///< slots per LBT channel access
  int lbt_ecca_max = 15;       ///< extended-CCA counter drawn in [0, max] after each burst
  int ul_grant_period_slots = 20;
  std::vector<Tech> nodes;

  /// Throws ConfigError on invalid parameters.
  void validate() const;

  friend bool operator==(const CoexistConfig&, const CoexistConfig&) = default;
};

struct SlotOutcome
{
  enum class Kind { idle, busy, collision };

  Kind kind = Kind::idle;
  int owner = -1; ///< transmitting node for busy slots

  static SlotOutcome idle() { return {}; }
  static SlotOutcome busy(int owner) { return {Kind::busy, owner}; }
  static SlotOutcome collision() { return {Kind::collision, -1}; }

  friend bool operator==(const SlotOutcome&, const SlotOutcome&) = default;
};

struct Reservation
{
  int owner = -1;
  std::int64_t until_slot = -1; ///< inclusive
};

struct ChannelState
{
  std::vector<SlotOutcome> history;
  std::optional<Reservation> reservation;

  /// True while another node holds an RTS/CTS reservation covering `slot`.
  bool reserved_against(int node, std::int64_t slot) const
  {
    return reservation && reservation->owner != node && slot <= reservation->until_slot;
  }
};

enum class Action { transmit, defer };

/**
 * Clear-channel assessment: transmit iff the last `cca_slots` slots of
 * `history` were idle. Slots before the start of history count as idle.
 * Busy slots owned by `ignore_owner` (the sensing UE's own gateway) are
 * treated as idle.
 */
Action lbt_decide(std::span<const SlotOutcome> history, int cca_slots, std::optional<int> ignore_owner = {});

/// Almost-blank-subframe pattern: muted iff (slot mod 10) < round(10·ratio).
bool abs_muted(double abs_ratio, std::int64_t slot);

/// Uplink grant issued by a gateway for a subframe `lookahead` slots ahead.
struct UplinkGrant
{
  int gateway = -1;
  int ue = -1;
  std::int64_t issued_slot = 0;
  std::int64_t scheduled_slot = 0;
};

UplinkGrant lbt_uplink_grant(int gateway, int ue, std::int64_t slot, int lookahead_slots);

enum class UplinkOutcome { transmit, refrain };

/// The UE senses before its scheduled subframe and refrains if the channel is busy.
UplinkOutcome sense_uplink(const UplinkGrant& grant, std::span<const SlotOutcome> history, int cca_slots);

/// Wi-Fi CSMA/CA with binary exponential backoff.
class DcfNode
{
public:
  DcfNode(int id, const CoexistConfig& cfg, Rng& rng);

  int id() const { return id_; }
  int backoff() const { return backoff_; }
  int cw() const { return cw_; }
  bool transmitting() const { return tx_remaining_ > 0; }

  /// Transmit while a packet is in flight or when the backoff counter is zero.
  Action decide(const ChannelState& channel, std::int64_t slot) const;

  /// Updates backoff and contention window from the slot outcome.
  void on_slot(std::int64_t slot, const SlotOutcome& outcome, bool transmitted, ChannelState& channel, Rng& rng);

  void set_backoff(int value) { backoff_ = value; }
  void set_cw(int value) { cw_ = value; }

private:
  int id_;
  int cw_min_;
  int cw_max_;
  int packet_slots_;
  bool rts_cts_;
  int cw_;
  int backoff_ = 0;
  int tx_remaining_ = 0;
  bool collided_ = false;
};

/// Convenience wrapper around DcfNode for the step-by-step API.
Action dcf_step(const DcfNode& node, const ChannelState& channel, std::int64_t slot);

struct NodeResult
{
  int id = 0;
  Tech tech = Tech::wifi;
  std::int64_t slots_won = 0;
  std::int64_t rescheduled = 0; ///< uplink grants moved to the licensed carrier
};

struct CoexistResult
{
  std::vector<NodeResult> nodes;
  std::int64_t n_slots = 0;
  std::int64_t idle_slots = 0;
  std::int64_t collision_slots = 0;

  /// Fraction of slots that delivered a payload.
  double utilization() const;
  std::int64_t slots_won(Tech tech) const;
};

/**
 * Runs `cfg.n_slots` slots. Per slot every node decides from the history up
 * to the previous slot; then the outcome is resolved and fed back. The run
 * is a pure function of (cfg, seed).
 */
CoexistResult run_coexistence(const CoexistConfig& cfg, std::uint64_t seed);

struct CoexistRow
{
  AccessMode mode = AccessMode::greedy;
  std::uint64_t seed = 0;
  int node_id = 0;
  Tech tech = Tech::wifi;
  std::int64_t slots_won = 0;
  std::int64_t standalone_slots_won = 0;
  double utilization = 0.0;
};

/// Each node is also run alone under the same mode and seed for its standalone figure.
std::vector<CoexistRow> coexist_sweep(const CoexistConfig& cfg, std::span<const std::uint64_t> seeds);

} // namespace lteu::coexist
