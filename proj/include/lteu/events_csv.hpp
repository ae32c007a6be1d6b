#pragma once

// CSV writers. Floats use four decimals with '.', rows end in '\n', and
// non-applicable columns are empty, so equal inputs give equal bytes.

#include <lteu/coexistence.hpp>
#include <lteu/engine.hpp>

#include <ostream>
#include <span>
#include <string>

namespace lteu::csv {

inline constexpr const char* kEventsHeader =
  "t_s,ue_id,event,serving,target,sinr_serving_db,sinr_target_db,decision_value,verdict";
inline constexpr const char* kCoexistHeader = "mode,seed,node_id,tech,slots_won,standalone_slots_won,utilization";

/// `%.4f`, with negative zero printed as 0.0000.
std::string format_fixed4(double v);

/// Cells are written as m<id> (macro) or u<id> (LTE-U microcell).
std::string format_cell(const engine::CellRef& cell);

std::string event_row(const engine::EventRecord& e);

/// Throws Error if the stream fails.
void emit_events_csv(std::span<const engine::EventRecord> log, std::ostream& sink);
void emit_coexist_csv(std::span<const coexist::CoexistRow> rows, std::ostream& sink);

/// Header plus one `x_m,y_m` row per site.
void emit_grid_csv(std::span<const topology::CellSite> sites, std::ostream& sink);

} // namespace lteu::csv
