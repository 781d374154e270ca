"""Nearest-neighbor benchmark policy with full revenue/energy accounting."""

from .energy import PowerParams
from .revenue import RevenueWeights
from .env import (
    EpisodeTrace,
    Scenario,
    TraceStep,
    apply_action,
    distance,
    is_terminal,
    position_of,
)


def greedy_rollout(
    scenario: Scenario,
    power_params: PowerParams | None = None,
    weights: RevenueWeights | None = None,
) -> EpisodeTrace:
    """Serve whichever unserved node is nearest, until none remain.

    Priorities never influence the choice; they only feed the revenue
    bookkeeping carried on the trace.  Distance ties break toward the
    lowest node id, so the rollout is deterministic.
    """
    state = scenario.initial_state()
    steps = []
    k = 0
    while not is_terminal(state):
        best, best_d = None, None
        for i, prio in enumerate(state.priorities):
            if prio == 0:
                continue
            d = distance(state.uav_pos, position_of(scenario, scenario.nodes[i].cell))
            if best is None or d < best_d:
                best, best_d = i, d
        prio = state.priorities[best]
        tr = apply_action(scenario, state, best, power_params, weights)
        steps.append(
            TraceStep(k, best, prio, tr.t_s, tr.distance, tr.energy, tr.revenue,
                      tr.next_state.clock)
        )
        state = tr.next_state
        k += 1
    return EpisodeTrace(tuple(steps))
