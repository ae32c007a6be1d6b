#pragma once

// Hexagonal macro layout, microcell placement, random-waypoint mobility and
// Euclidean target-cell prediction.

#include <lteu/common.hpp>
#include <lteu/radio.hpp>

#include <optional>
#include <span>
#include <vector>

namespace lteu::topology {

using radio::Rng;

struct CellSite
{
  CellId id{};
  CellKind kind = CellKind::macro_enb;
  Vec2 position;
  radio::TxConfig tx;
  std::optional<int> gateway_id; ///< LTE-U gateway; microcells only
  std::optional<CellId> parent;  ///< macro cell whose hexagon contains a microcell
};

struct BoundingBox
{
  Vec2 min;
  Vec2 max;

  bool contains(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
};

/**
 * Pointy-top hexagonal macro layout. Site 0 is at the origin and later sites
 * fill ring 1, ring 2, ... in a fixed order, so nearest neighbours are
 * √3·radius apart.
 */
class HexGrid
{
public:
  static HexGrid build(int n_macro, double radius_m, double macro_tx_dbm = 43.0);

  double cell_radius_m() const { return radius_m_; }
  const std::vector<CellSite>& macro_sites() const { return macros_; }
  const BoundingBox& bounds() const { return bounds_; }

  bool in_hexagon(const CellSite& macro, Vec2 p) const;

private:
  double radius_m_ = 0.0;
  std::vector<CellSite> macros_;
  BoundingBox bounds_;
};

inline HexGrid
build_hex_grid(int n_macro, double radius_m)
{
  return HexGrid::build(n_macro, radius_m);
}

/// `per_cell` microcells uniform inside each macro hexagon; ids continue after the macros.
std::vector<CellSite> place_microcells(const HexGrid& grid, int per_cell, Rng& rng, double micro_tx_dbm = 10.0);

struct MobilityConfig
{
  double speed_min_kmh = 0.0;
  double speed_max_kmh = 30.0;

  friend bool operator==(const MobilityConfig&, const MobilityConfig&) = default;
};

struct UeState
{
  UeId id{};
  Vec2 position;
  Vec2 velocity_kmh; ///< components in km/h
  double speed_kmh = 0.0;
  Vec2 waypoint;
  CellId serving{};
  TrafficClass traffic = TrafficClass::real_time;
  double battery_hours = 0.0;
};

/// Draws a fresh waypoint and speed and points the velocity at the waypoint.
void retarget(UeState& ue, const BoundingBox& box, const MobilityConfig& mobility, Rng& rng);

/**
 * Random-waypoint step: advance toward the waypoint at the current speed;
 * on arrival draw a new waypoint and speed. Positions are reflected back
 * into the bounding box.
 */
UeState step_ue(UeState ue, double dt_s, const BoundingBox& box, const MobilityConfig& mobility, Rng& rng);

/// Candidate closest to position + velocity·horizon; ties go to the lowest id.
CellId predict_target_cell(const UeState& ue, std::span<const CellSite> candidates, double horizon_s);

/// Same rule over bare (id, position) pairs.
CellId predict_target_cell(Vec2 position,
                           Vec2 velocity_kmh,
                           std::span<const std::pair<CellId, Vec2>> candidates,
                           double horizon_s);

} // namespace lteu::topology
