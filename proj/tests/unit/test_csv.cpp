#include <lteu/events_csv.hpp>

#include <doctest.h>

#include <sstream>

using namespace lteu;
using namespace lteu::engine;
using namespace lteu::csv;

namespace {

std::string
render(std::span<const EventRecord> log)
{
  std::ostringstream out;
  emit_events_csv(log, out);
  return out.str();
}

} // namespace

TEST_CASE("empty log is the header line only")
{
  CHECK(render({}) == std::string(kEventsHeader) + "\n");
}

TEST_CASE("decide row formatting")
{
  EventRecord e;
  e.t_s = 12.3;
  e.ue = UeId{4};
  e.event = EventKind::decide;
  e.serving = {CellId{0}, CellKind::macro_enb};
  e.target = CellRef{CellId{17}, CellKind::lteu_microcell};
  e.sinr_serving_db = 10.0;
  e.sinr_target_db = 13.25;
  e.decision_value = 0.853;
  e.verdict = handover::Verdict::proactive;
  const auto row = event_row(e);
  CHECK(row == "12.3000,4,decide,m0,u17,10.0000,13.2500,0.8530,proactive");
  CHECK(row.ends_with(",0.8530,proactive"));
}

TEST_CASE("absent fields are empty")
{
  EventRecord e;
  e.t_s = 0.1;
  e.ue = UeId{0};
  e.event = EventKind::measure;
  e.serving = {CellId{2}, CellKind::macro_enb};
  e.sinr_serving_db = -3.5;
  CHECK(event_row(e) == "0.1000,0,measure,m2,,-3.5000,,,");
}

TEST_CASE("fixed-point formatting")
{
  CHECK(format_fixed4(0.0) == "0.0000");
  CHECK(format_fixed4(-0.0) == "0.0000");
  CHECK(format_fixed4(-0.00001) == "0.0000");
  CHECK(format_fixed4(-1.23456) == "-1.2346");
  CHECK(format_fixed4(100.0) == "100.0000");
}

TEST_CASE("same log, same bytes")
{
  std::vector<EventRecord> log(3);
  for (std::size_t i = 0; i < log.size(); ++i)
    {
      log[i].t_s = 0.1 * static_cast<double>(i);
      log[i].ue = UeId{static_cast<int>(i)};
      log[i].sinr_serving_db = 1.0 / 3.0;
    }
  const auto a = render(log);
  CHECK(a == render(log));
  CHECK(a.find('\r') == std::string::npos);
  CHECK(std::count(a.begin(), a.end(), '\n') == 4);
}

TEST_CASE("grid and coexistence tables")
{
  std::vector<topology::CellSite> sites(1);
  std::ostringstream grid;
  emit_grid_csv(sites, grid);
  CHECK(grid.str() == "x_m,y_m\n0.0000,0.0000\n");

  const std::vector<coexist::CoexistRow> rows{
    {coexist::AccessMode::lbt, 3, 1, coexist::Tech::wifi, 2500, 8000, 0.75}};
  std::ostringstream co;
  emit_coexist_csv(rows, co);
  CHECK(co.str() == std::string(kCoexistHeader) + "\nlbt,3,1,wifi,2500,8000,0.7500\n");
}

TEST_CASE("write failures surface")
{
  std::ostringstream sink;
  sink.setstate(std::ios::badbit);
  CHECK_THROWS_AS(emit_events_csv({}, sink), Error);
}
