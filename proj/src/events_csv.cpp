#include <lteu/events_csv.hpp>

#include <cstdio>

namespace lteu::csv {

namespace {

void
check(const std::ostream& sink, const char* what)
{
  if (!sink)
    {
      throw Error(std::string("failed to write ") + what + " CSV");
    }
}

} // namespace

std::string
format_fixed4(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string out(buf);
  if (out == "-0.0000")
    {
      out.erase(0, 1);
    }
  return out;
}

std::string
format_cell(const engine::CellRef& cell)
{
  return (cell.kind == CellKind::macro_enb ? "m" : "u") + std::to_string(to_int(cell.id));
}

std::string
event_row(const engine::EventRecord& e)
{
  std::string row = format_fixed4(e.t_s);
  auto field = [&row](const std::string& s) {
    row.push_back(',');
    row += s;
  };
  auto opt = [&field](const std::optional<double>& v) { field(v ? format_fixed4(*v) : std::string()); };
  field(std::to_string(to_int(e.ue)));
  field(engine::to_string(e.event));
  field(format_cell(e.serving));
  field(e.target ? format_cell(*e.target) : std::string());
  opt(e.sinr_serving_db);
  opt(e.sinr_target_db);
  opt(e.decision_value);
  field(e.verdict ? handover::to_string(*e.verdict) : "");
  return row;
}

void
emit_events_csv(std::span<const engine::EventRecord> log, std::ostream& sink)
{
  sink << kEventsHeader << '\n';
  for (const auto& e : log)
    {
      sink << event_row(e) << '\n';
    }
  sink.flush();
  check(sink, "event");
}

void
emit_coexist_csv(std::span<const coexist::CoexistRow> rows, std::ostream& sink)
{
  sink << kCoexistHeader << '\n';
  for (const auto& r : rows)
    {
      sink << coexist::to_string(r.mode) << ',' << r.seed << ',' << r.node_id << ',' << coexist::to_string(r.tech)
           << ',' << r.slots_won << ',' << r.standalone_slots_won << ',' << format_fixed4(r.utilization) << '\n';
    }
  sink.flush();
  check(sink, "coexistence");
}

void
emit_grid_csv(std::span<const topology::CellSite> sites, std::ostream& sink)
{
  sink << "x_m,y_m\n";
  for (const auto& s : sites)
    {
      sink << format_fixed4(s.position.x) << ',' << format_fixed4(s.position.y) << '\n';
    }
  sink.flush();
  check(sink, "grid");
}

} // namespace lteu::csv
