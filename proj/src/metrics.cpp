#include <lteu/engine.hpp>

#include <limits>
#include <map>

namespace lteu::engine {

int
UeMetrics::handover_total() const
{
  int total = 0;
  for (int h : handovers)
    {
      total += h;
    }
  return total;
}

double
UeMetrics::mean_throughput_mbps() const
{
  return samples > 0 ? throughput_sum_mbps / static_cast<double>(samples) : 0.0;
}

double
UeMetrics::time_in_microcell() const
{
  return samples > 0 ? static_cast<double>(micro_samples) / static_cast<double>(samples) : 0.0;
}

void
UeMetrics::add(const UeMetrics& other)
{
  for (std::size_t i = 0; i < handovers.size(); ++i)
    {
      handovers[i] += other.handovers[i];
    }
  pingpong += other.pingpong;
  temp_requests += other.temp_requests;
  temp_grants += other.temp_grants;
  throughput_sum_mbps += other.throughput_sum_mbps;
  samples += other.samples;
  micro_samples += other.micro_samples;
}

UeMetrics
Metrics::aggregate() const
{
  UeMetrics total;
  for (const auto& ue : per_ue)
    {
      total.add(ue);
    }
  return total;
}

namespace {

struct LastExec
{
  CellId from{};
  double t_s = 0.0;
};

} // namespace

Metrics
summarize_metrics(std::span<const EventRecord> log, const SummaryContext& ctx)
{
  Metrics out;
  std::map<int, LastExec> last_exec;
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const auto& e : log)
    {
      if (e.t_s < prev_t)
        {
          throw Error("event log timestamps go backwards at t=" + std::to_string(e.t_s));
        }
      prev_t = e.t_s;
      const int ue = to_int(e.ue);
      if (ue < 0)
        {
          throw Error("event log has a negative ue id");
        }
      if (static_cast<std::size_t>(ue) >= out.per_ue.size())
        {
          out.per_ue.resize(static_cast<std::size_t>(ue) + 1);
        }
      auto& m = out.per_ue[static_cast<std::size_t>(ue)];
      switch (e.event)
        {
        case EventKind::measure:
          if (!e.sinr_serving_db)
            {
              throw Error("measure event without serving SINR");
            }
          m.throughput_sum_mbps += radio::shannon_throughput_mbps(*e.sinr_serving_db, ctx.bandwidth_mhz);
          ++m.samples;
          if (e.serving.kind == CellKind::lteu_microcell)
            {
              ++m.micro_samples;
            }
          break;
        case EventKind::handover_exec:
          {
            if (!e.target)
              {
                throw Error("handover_exec event without target");
              }
            ++m.handovers[static_cast<std::size_t>(handover::scenario_between(e.serving.kind, e.target->kind))];
            auto it = last_exec.find(ue);
            if (it != last_exec.end() && it->second.from == e.target->id
                && e.t_s - it->second.t_s <= ctx.pingpong_window_s)
              {
                ++m.pingpong;
              }
            last_exec[ue] = LastExec{e.serving.id, e.t_s};
            break;
          }
        case EventKind::temp_request:
          ++m.temp_requests;
          break;
        case EventKind::temp_grant:
          ++m.temp_grants;
          break;
        case EventKind::decide:
          break;
        }
    }
  return out;
}

} // namespace lteu::engine
