"""Per-service revenue: priority reward minus waiting-delay and energy penalties."""

from dataclasses import dataclass


@dataclass(frozen=True)
class RevenueWeights:
    """Tuning weights of the revenue function."""

    w1: float = 30.0   # reward per priority unit, dimensionless
    w2: float = 7.5    # waiting-delay penalty rate, 1/s
    w3: float = 0.1    # energy penalty rate, 1/J

    def __post_init__(self):
        if self.w1 < 0 or self.w2 < 0 or self.w3 < 0:
            raise ValueError("revenue weights must be nonnegative")


# Named regimes: default balances all three terms; each other preset blows
# one weight up to force a single-objective behaviour.
WEIGHT_PRESETS = {
    "default": RevenueWeights(),
    "dql1": RevenueWeights(w1=30000.0, w2=7.5, w3=0.1),   # chase high-priority nodes first
    "dql2": RevenueWeights(w1=30.0, w2=750.0, w3=0.1),    # punish keeping nodes waiting
    "dql3": RevenueWeights(w1=30.0, w2=7.5, w3=100.0),    # punish energy, near-shortest path
}


def revenue(
    weights: RevenueWeights,
    served_priority: int,
    waiting_priority_sum: float,
    t_s: float,
    energy: float,
) -> float:
    """Revenue of serving one node: w1*prio - w2*(waiting sum)*t_s - w3*energy.

    `waiting_priority_sum` is the summed priority of every node still
    waiting, excluding the one just served; already-served nodes carry
    priority 0 and so drop out of the sum on their own.
    """
    if served_priority == 0:
        raise ValueError("served node has priority 0 (already served)")
    if served_priority not in (1, 2, 3, 4):
        raise ValueError(f"served priority must be in 1..4, got {served_priority}")
    if waiting_priority_sum < 0 or t_s < 0 or energy < 0:
        raise ValueError("waiting sum, flight time, and energy must be nonnegative")
    return (
        weights.w1 * served_priority
        - weights.w2 * waiting_priority_sum * t_s
        - weights.w3 * energy
    )
