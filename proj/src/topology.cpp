#include <lteu/topology.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace lteu::topology {

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Axial neighbour directions; ring k starts at direction 4 scaled by k.
constexpr std::array<std::pair<int, int>, 6> kHexDirections{{{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

Vec2
axial_to_point(int q, int r, double radius)
{
  return {kSqrt3 * radius * (q + r / 2.0), 1.5 * radius * r};
}

double
reflect_into(double v, double lo, double hi, bool& flipped)
{
  flipped = false;
  for (int guard = 0; guard < 4 && (v < lo || v > hi); ++guard)
    {
      v = v < lo ? 2 * lo - v : 2 * hi - v;
      flipped = !flipped;
    }
  return std::clamp(v, lo, hi);
}

} // namespace

HexGrid
HexGrid::build(int n_macro, double radius_m, double macro_tx_dbm)
{
  if (n_macro <= 0)
    {
      throw ConfigError("n_macro must be at least 1");
    }
  if (!(radius_m > 0.0))
    {
      throw ConfigError("cell radius must be positive");
    }

  std::vector<std::pair<int, int>> axial{{0, 0}};
  for (int ring = 1; static_cast<int>(axial.size()) < n_macro; ++ring)
    {
      int q = kHexDirections[4].first * ring;
      int r = kHexDirections[4].second * ring;
      for (const auto& [dq, dr] : kHexDirections)
        {
          for (int j = 0; j < ring; ++j)
            {
              axial.emplace_back(q, r);
              q += dq;
              r += dr;
            }
        }
    }
  axial.resize(static_cast<std::size_t>(n_macro));

  HexGrid grid;
  grid.radius_m_ = radius_m;
  grid.bounds_.min = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  grid.bounds_.max = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < n_macro; ++i)
    {
      const auto [q, r] = axial[static_cast<std::size_t>(i)];
      CellSite site;
      site.id = CellId{i};
      site.kind = CellKind::macro_enb;
      site.position = axial_to_point(q, r, radius_m);
      site.tx = radio::TxConfig::macro(macro_tx_dbm);
      grid.macros_.push_back(site);

      const double hx = kSqrt3 * radius_m / 2.0;
      grid.bounds_.min.x = std::min(grid.bounds_.min.x, site.position.x - hx);
      grid.bounds_.min.y = std::min(grid.bounds_.min.y, site.position.y - radius_m);
      grid.bounds_.max.x = std::max(grid.bounds_.max.x, site.position.x + hx);
      grid.bounds_.max.y = std::max(grid.bounds_.max.y, site.position.y + radius_m);
    }
  return grid;
}

bool
HexGrid::in_hexagon(const CellSite& macro, Vec2 p) const
{
  const double dx = std::abs(p.x - macro.position.x);
  const double dy = std::abs(p.y - macro.position.y);
  const double half_width = kSqrt3 * radius_m_ / 2.0;
  return dx <= half_width && dy <= radius_m_ - dx / kSqrt3;
}

std::vector<CellSite>
place_microcells(const HexGrid& grid, int per_cell, Rng& rng, double micro_tx_dbm)
{
  if (per_cell < 0)
    {
      throw ConfigError("micro_per_cell must be nonnegative");
    }
  const double radius = grid.cell_radius_m();
  const double half_width = kSqrt3 * radius / 2.0;
  std::uniform_real_distribution<double> ux(-half_width, half_width);
  std::uniform_real_distribution<double> uy(-radius, radius);

  std::vector<CellSite> out;
  int next_id = static_cast<int>(grid.macro_sites().size());
  for (const auto& macro : grid.macro_sites())
    {
      for (int k = 0; k < per_cell; ++k)
        {
          Vec2 p;
          do
            {
              p = macro.position + Vec2{ux(rng), uy(rng)};
            }
          while (!grid.in_hexagon(macro, p));

          CellSite site;
          site.id = CellId{next_id++};
          site.kind = CellKind::lteu_microcell;
          site.position = p;
          site.tx = radio::TxConfig::micro(micro_tx_dbm);
          site.gateway_id = to_int(macro.id);
          site.parent = macro.id;
          out.push_back(site);
        }
    }
  return out;
}

void
retarget(UeState& ue, const BoundingBox& box, const MobilityConfig& mobility, Rng& rng)
{
  ue.waypoint = {std::uniform_real_distribution<double>(box.min.x, box.max.x)(rng),
                 std::uniform_real_distribution<double>(box.min.y, box.max.y)(rng)};
  ue.speed_kmh = mobility.speed_max_kmh > mobility.speed_min_kmh
                   ? std::uniform_real_distribution<double>(mobility.speed_min_kmh, mobility.speed_max_kmh)(rng)
                   : mobility.speed_min_kmh;
  const Vec2 heading = ue.waypoint - ue.position;
  const double len = heading.norm();
  ue.velocity_kmh = len > 0.0 ? heading * (ue.speed_kmh / len) : Vec2{};
}

UeState
step_ue(UeState ue, double dt_s, const BoundingBox& box, const MobilityConfig& mobility, Rng& rng)
{
  if (!(dt_s > 0.0))
    {
      throw Error("mobility step needs dt > 0");
    }
  const Vec2 to_go = ue.waypoint - ue.position;
  const double remaining = to_go.norm();
  const double travel = ue.speed_kmh / kKmhPerMps * dt_s;

  if (remaining <= 0.0 || (travel > 0.0 && travel >= remaining))
    {
      ue.position = ue.waypoint;
      retarget(ue, box, mobility, rng);
    }
  else
    {
      ue.position = ue.position + to_go * (travel / remaining);
      ue.velocity_kmh = to_go * (ue.speed_kmh / remaining);
    }

  bool flip_x = false;
  bool flip_y = false;
  ue.position.x = reflect_into(ue.position.x, box.min.x, box.max.x, flip_x);
  ue.position.y = reflect_into(ue.position.y, box.min.y, box.max.y, flip_y);
  if (flip_x)
    {
      ue.velocity_kmh.x = -ue.velocity_kmh.x;
    }
  if (flip_y)
    {
      ue.velocity_kmh.y = -ue.velocity_kmh.y;
    }
  return ue;
}

CellId
predict_target_cell(Vec2 position,
                    Vec2 velocity_kmh,
                    std::span<const std::pair<CellId, Vec2>> candidates,
                    double horizon_s)
{
  if (candidates.empty())
    {
      throw Error("mobility prediction needs at least one candidate cell");
    }
  const Vec2 projected = position + velocity_kmh * (horizon_s / kKmhPerMps);
  const auto* best = &candidates.front();
  double best_d = distance(projected, best->second);
  for (const auto& cand : candidates.subspan(1))
    {
      const double d = distance(projected, cand.second);
      if (d < best_d || (d == best_d && cand.first < best->first))
        {
          best = &cand;
          best_d = d;
        }
    }
  return best->first;
}

CellId
predict_target_cell(const UeState& ue, std::span<const CellSite> candidates, double horizon_s)
{
  std::vector<std::pair<CellId, Vec2>> pts;
  pts.reserve(candidates.size());
  for (const auto& c : candidates)
    {
      pts.emplace_back(c.id, c.position);
    }
  return predict_target_cell(ue.position, ue.velocity_kmh, pts, horizon_s);
}

} // namespace lteu::topology
