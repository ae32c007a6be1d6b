#include <lteu/handover.hpp>

namespace lteu::handover {

namespace {

Execution
execute(UeSessionState& state, CellId to, Verdict cause, double t_s, const HandoverConfig& cfg)
{
  Execution ex{state.serving, to, cause, false};
  ex.pingpong = state.previous_serving == to && state.last_handover_s
                && t_s - *state.last_handover_s <= cfg.pingpong_window_s;

  state.previous_serving = state.serving;
  state.serving = to;
  state.last_handover_s = t_s;
  state.pending_reactive.reset();
  ++state.handover_count;
  if (ex.pingpong)
    {
      ++state.pingpong_count;
    }
  return ex;
}

} // namespace

SessionStep
advance_session(UeSessionState state,
                const HandoverDecision& decision,
                const RxLookup& rx_of,
                double t_s,
                const HandoverConfig& cfg)
{
  SessionStep step;

  if (decision.verdict != Verdict::none && decision.target)
    {
      const CellId target = *decision.target;
      if (state.pending_reactive && state.pending_reactive->target != target)
        {
          state.pending_reactive.reset();
        }
      if (target != state.serving)
        {
          if (decision.verdict == Verdict::proactive)
            {
              step.executed = execute(state, target, Verdict::proactive, t_s, cfg);
              step.state = std::move(state);
              return step;
            }
          if (decision.verdict == Verdict::reactive_pending && !state.pending_reactive)
            {
              state.pending_reactive = PendingReactive{target, t_s};
            }
        }
    }

  if (state.pending_reactive)
    {
      const CellId target = state.pending_reactive->target;
      if (target == state.serving)
        {
          state.pending_reactive.reset();
        }
      else if (auto rx = rx_of ? rx_of(target) : std::nullopt; rx && *rx >= cfg.reactive_threshold_dbm)
        {
          step.executed = execute(state, target, Verdict::reactive_pending, t_s, cfg);
        }
    }

  step.state = std::move(state);
  return step;
}

} // namespace lteu::handover
