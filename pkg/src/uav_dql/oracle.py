"""Exact optimal serving orders for small instances.

Two independent routes to the same answer: brute-force enumeration of all
n! orders, and a subset dynamic program over (current perch, served set)
states.  Both score an order by its discounted sum of per-service
revenues, with accounting identical to the environment's transition.
"""

import itertools

from .energy import PowerParams, flight_energy
from .revenue import RevenueWeights, revenue
from .env import CapacityError, Scenario, apply_action, distance, position_of

PERMUTATION_NODE_LIMIT = 9   # n! blows up past this
DP_NODE_LIMIT = 20           # 2^n states past this


def optimal_by_permutation(
    scenario: Scenario,
    power_params: PowerParams | None = None,
    weights: RevenueWeights | None = None,
    gamma: float = 0.95,
) -> tuple[tuple[int, ...], float]:
    """Best (order, discounted return) over every serving permutation.

    Exact ties resolve toward the lexicographically smallest order, which
    falls out of enumerating permutations in lexicographic order with a
    strict improvement test.
    """
    n = scenario.n_nodes
    if n > PERMUTATION_NODE_LIMIT:
        raise CapacityError(
            f"permutation oracle capped at {PERMUTATION_NODE_LIMIT} nodes, got {n}"
        )
    best_order, best_return = None, None
    for perm in itertools.permutations(range(n)):
        state = scenario.initial_state()
        total, g = 0.0, 1.0
        for node_id in perm:
            tr = apply_action(scenario, state, node_id, power_params, weights)
            total += g * tr.revenue
            g *= gamma
            state = tr.next_state
        if best_return is None or total > best_return:
            best_order, best_return = perm, total
    return best_order, best_return


def optimal_by_dp(
    scenario: Scenario,
    power_params: PowerParams | None = None,
    weights: RevenueWeights | None = None,
    gamma: float = 0.95,
) -> tuple[tuple[int, ...], float]:
    """Best (order, discounted return) by dynamic programming over subsets.

    States are (perch, served-set bitmask); value(pos, mask) is the best
    discounted return over the remaining nodes, so the whole search is
    O(n^2 * 2^n) instead of n!.  Uses the same leg time/energy/revenue
    functions as the environment, evaluated per (source, target) pair.
    """
    n = scenario.n_nodes
    if n > DP_NODE_LIMIT:
        raise CapacityError(f"subset-DP oracle capped at {DP_NODE_LIMIT} nodes, got {n}")

    positions = [position_of(scenario, scenario.uav_start)] + [
        position_of(scenario, node.cell) for node in scenario.nodes
    ]
    if power_params is None:
        power_params = PowerParams()
    if weights is None:
        weights = RevenueWeights()
    # legs[src][dst]: src 0 is the start perch, src i+1 / dst j is node j.
    legs = [
        [
            (
                distance(positions[src], positions[dst + 1]) / power_params.V,
                flight_energy(power_params, distance(positions[src], positions[dst + 1])),
            )
            for dst in range(n)
        ]
        for src in range(n + 1)
    ]
    priorities = scenario.initial_priorities()
    total_priority = sum(priorities)
    full = (1 << n) - 1

    value: dict[tuple[int, int], float] = {}
    choice: dict[tuple[int, int], int] = {}

    def solve(pos: int, mask: int) -> float:
        if mask == full:
            return 0.0
        cached = value.get((pos, mask))
        if cached is not None:
            return cached
        served_sum = sum(p for i, p in enumerate(priorities) if mask >> i & 1)
        rest_sum = total_priority - served_sum
        best_v, best_j = None, None
        for j in range(n):
            if mask >> j & 1:
                continue
            t_s, leg_energy = legs[pos][j]
            r = revenue(weights, priorities[j], rest_sum - priorities[j], t_s, leg_energy)
            v = r + gamma * solve(j + 1, mask | (1 << j))
            if best_v is None or v > best_v:
                best_v, best_j = v, j
        value[(pos, mask)] = best_v
        choice[(pos, mask)] = best_j
        return best_v

    best_return = solve(0, 0)
    order = []
    pos, mask = 0, 0
    while mask != full:
        j = choice[(pos, mask)]
        order.append(j)
        mask |= 1 << j
        pos = j + 1
    return tuple(order), best_return
