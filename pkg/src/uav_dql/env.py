"""Problem instances, mission state, and the node-serving transition.

A scenario is a grid of square cells with a fleet start corner and a set
of ground nodes, each carrying a service priority from 1 (low) to 4
(very high).  The UAV serves nodes one at a time by flying straight to
them at constant speed; serving takes zero time and zeroes the node's
priority.  An episode ends when every priority is zero.
"""

import math
from dataclasses import dataclass

import numpy as np

from .energy import PowerParams, flight_energy
from .revenue import RevenueWeights, revenue

PRIORITY_LEVELS = (1, 2, 3, 4)  # low, medium, high, very high


class ScenarioError(ValueError):
    """Invalid scenario data; carries the offending line number when parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapacityError(ValueError):
    """Instance exceeds a hard size guard."""


@dataclass(frozen=True)
class NodePoint:
    id: int
    cell: tuple[int, int]   # grid coordinate (gx, gy)
    priority: int           # service priority, 1..4


@dataclass(frozen=True)
class Scenario:
    """Immutable problem instance: grid geometry, start cell, node layout."""

    grid_width: int
    grid_height: int
    cell_side: float        # meters
    uav_start: tuple[int, int]
    nodes: tuple[NodePoint, ...]
    seed: int = 0           # provenance of random generation; 0 if hand-built

    def __post_init__(self):
        if self.grid_width < 1 or self.grid_height < 1:
            raise ScenarioError("grid dimensions must be at least 1x1")
        if not self.cell_side > 0:
            raise ScenarioError("cell side must be positive")
        if self.seed < 0:
            raise ScenarioError("seed must be a nonnegative integer")
        if not self._in_bounds(self.uav_start):
            raise ScenarioError(f"uav start {self.uav_start} outside grid")
        for i, node in enumerate(self.nodes):
            if node.id != i:
                raise ScenarioError(f"node ids must run 0..n-1 in order, got {node.id} at index {i}")
            if not self._in_bounds(node.cell):
                raise ScenarioError(f"node {node.id} cell {node.cell} outside grid")
            if node.cell == tuple(self.uav_start):
                raise ScenarioError(f"node {node.id} occupies the uav start cell")
            if node.priority not in PRIORITY_LEVELS:
                raise ScenarioError(f"node {node.id} priority must be in 1..4, got {node.priority}")

    def _in_bounds(self, cell):
        gx, gy = cell
        return 0 <= gx < self.grid_width and 0 <= gy < self.grid_height

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def initial_priorities(self) -> tuple[int, ...]:
        return tuple(node.priority for node in self.nodes)

    def initial_state(self) -> "SimState":
        return SimState(
            uav_pos=position_of(self, self.uav_start),
            priorities=self.initial_priorities(),
            clock=0.0,
            uav_cell=tuple(self.uav_start),
        )


@dataclass(frozen=True)
class SimState:
    """Mission state between services.

    `uav_cell` is the grid perch the UAV currently sits on (start cell or
    some node's cell); `uav_pos` is the same point in meters.  Carrying the
    cell avoids recovering it from the float position when building
    tabular state keys.
    """

    uav_pos: tuple[float, float]
    priorities: tuple[int, ...]   # current priority per node, 0 = served
    clock: float                  # seconds since episode start
    uav_cell: tuple[int, int]


@dataclass(frozen=True)
class Transition:
    """One service step: flight leg plus the bookkeeping of serving a node."""

    action: int        # node id served
    t_s: float         # flight seconds since the previous service
    distance: float    # leg length, meters
    energy: float      # leg propulsion energy, J
    revenue: float
    next_state: SimState


@dataclass(frozen=True)
class TraceStep:
    step: int
    node_id: int
    priority: int      # priority the node carried when served
    t_s: float
    distance: float
    energy: float
    revenue: float
    clock: float       # mission clock at the moment of service


@dataclass(frozen=True)
class EpisodeTrace:
    """Ordered record of the services performed in one episode."""

    steps: tuple[TraceStep, ...]

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(s.node_id for s in self.steps)

    @property
    def total_revenue(self) -> float:
        return sum(s.revenue for s in self.steps)

    @property
    def total_energy(self) -> float:
        return sum(s.energy for s in self.steps)

    @property
    def path_length(self) -> float:
        return sum(s.distance for s in self.steps)

    @property
    def delays(self) -> dict[int, float]:
        """Mission clock at which each node was served, keyed by node id."""
        return {s.node_id: s.clock for s in self.steps}

    def discounted_return(self, gamma: float) -> float:
        total, g = 0.0, 1.0
        for s in self.steps:
            total += g * s.revenue
            g *= gamma
        return total

    def is_complete(self, scenario: Scenario) -> bool:
        return sorted(self.order) == list(range(scenario.n_nodes))


def position_of(scenario: Scenario, cell) -> tuple[float, float]:
    """Meters position of a grid cell: corner scaling (gx*side, gy*side)."""
    gx, gy = cell
    if not scenario._in_bounds((gx, gy)):
        raise ScenarioError(
            f"cell {(gx, gy)} outside {scenario.grid_width}x{scenario.grid_height} grid"
        )
    return (gx * scenario.cell_side, gy * scenario.cell_side)


def distance(a, b) -> float:
    """Euclidean distance in meters between two positions."""
    return math.hypot(b[0] - a[0], b[1] - a[1])


def is_terminal(state: SimState) -> bool:
    return all(p == 0 for p in state.priorities)


def apply_action(
    scenario: Scenario,
    state: SimState,
    action: int,
    power_params: PowerParams | None = None,
    weights: RevenueWeights | None = None,
) -> Transition:
    """Fly to node `action`, serve it, and account the step's revenue.

    The waiting-delay penalty weights the flight time by the priorities the
    *other* nodes held before this service; the served node is excluded and
    already-served nodes contribute 0.  Service itself takes zero time.
    """
    if power_params is None:
        power_params = PowerParams()
    if weights is None:
        weights = RevenueWeights()
    if not 0 <= action < scenario.n_nodes:
        raise ValueError(f"action {action} out of range for {scenario.n_nodes} nodes")
    prio = state.priorities[action]
    if prio == 0:
        raise ValueError(f"node {action} is already served")

    node = scenario.nodes[action]
    target = position_of(scenario, node.cell)
    dist = distance(state.uav_pos, target)
    t_s = dist / power_params.V
    leg_energy = flight_energy(power_params, dist)
    waiting_sum = sum(state.priorities) - prio
    step_revenue = revenue(weights, prio, waiting_sum, t_s, leg_energy)

    next_priorities = tuple(0 if i == action else p for i, p in enumerate(state.priorities))
    next_state = SimState(
        uav_pos=target,
        priorities=next_priorities,
        clock=state.clock + t_s,
        uav_cell=node.cell,
    )
    return Transition(action, t_s, dist, leg_energy, step_revenue, next_state)


def serve_in_order(
    scenario: Scenario,
    order,
    power_params: PowerParams | None = None,
    weights: RevenueWeights | None = None,
) -> EpisodeTrace:
    """Roll out a fixed serving order and return its trace."""
    state = scenario.initial_state()
    steps = []
    for k, node_id in enumerate(order):
        prio = state.priorities[node_id]
        tr = apply_action(scenario, state, node_id, power_params, weights)
        steps.append(
            TraceStep(k, node_id, prio, tr.t_s, tr.distance, tr.energy, tr.revenue,
                      tr.next_state.clock)
        )
        state = tr.next_state
    return EpisodeTrace(tuple(steps))


def generate_scenario(
    seed: int,
    grid_width: int = 6,
    grid_height: int = 6,
    cell_side: float = 50.0,
    n_nodes: int = 6,
) -> Scenario:
    """Randomly place `n_nodes` nodes on the grid, deterministically per seed.

    Nodes land on distinct cells drawn uniformly from the grid excluding the
    start corner; priorities are uniform over 1..4.  The UAV always starts at
    the bottom-left corner (0, 0).
    """
    start = (0, 0)
    free_cells = [
        (gx, gy)
        for gx in range(grid_width)
        for gy in range(grid_height)
        if (gx, gy) != start
    ]
    if n_nodes > len(free_cells):
        raise CapacityError(
            f"cannot place {n_nodes} nodes on a {grid_width}x{grid_height} grid "
            f"(start cell reserved, {len(free_cells)} cells free)"
        )
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(free_cells), size=n_nodes, replace=False)
    priorities = rng.integers(1, 5, size=n_nodes)
    nodes = tuple(
        NodePoint(i, free_cells[int(k)], int(p))
        for i, (k, p) in enumerate(zip(picks, priorities))
    )
    return Scenario(grid_width, grid_height, cell_side, start, nodes, seed=int(seed))


# ---------------------------------------------------------------------------
# Scenario file format: line-oriented text, whitespace-separated.
#   grid W H CELL_SIDE_M
#   start GX GY
#   node ID GX GY PRIORITY     (one per node; line order defines indices)
# '#' begins a comment; blank lines are ignored.
# ---------------------------------------------------------------------------

def scenario_to_text(scenario: Scenario) -> str:
    lines = [f"# seed={scenario.seed}"]
    cell = scenario.cell_side
    cell_txt = repr(cell) if cell != int(cell) else str(int(cell))
    lines.append(f"grid {scenario.grid_width} {scenario.grid_height} {cell_txt}")
    lines.append(f"start {scenario.uav_start[0]} {scenario.uav_start[1]}")
    for node in scenario.nodes:
        lines.append(f"node {node.id} {node.cell[0]} {node.cell[1]} {node.priority}")
    return "\n".join(lines) + "\n"


def parse_scenario(text: str) -> Scenario:
    grid = None
    start = None
    nodes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "grid":
            if grid is not None:
                raise ScenarioError("duplicate grid line", line=lineno)
            if len(fields) != 4:
                raise ScenarioError("grid line needs W H CELL_SIDE_M", line=lineno)
            try:
                grid = (int(fields[1]), int(fields[2]), float(fields[3]))
            except ValueError:
                raise ScenarioError(f"bad grid values {fields[1:]!r}", line=lineno) from None
        elif kind == "start":
            if grid is None:
                raise ScenarioError("start line before grid line", line=lineno)
            if start is not None:
                raise ScenarioError("duplicate start line", line=lineno)
            if len(fields) != 3:
                raise ScenarioError("start line needs GX GY", line=lineno)
            try:
                start = (int(fields[1]), int(fields[2]))
            except ValueError:
                raise ScenarioError(f"bad start cell {fields[1:]!r}", line=lineno) from None
        elif kind == "node":
            if grid is None or start is None:
                raise ScenarioError("node line before grid/start lines", line=lineno)
            if len(fields) != 5:
                raise ScenarioError("node line needs ID GX GY PRIORITY", line=lineno)
            try:
                node_id, gx, gy, prio = (int(f) for f in fields[1:])
            except ValueError:
                raise ScenarioError(f"bad node values {fields[1:]!r}", line=lineno) from None
            if node_id != len(nodes):
                raise ScenarioError(
                    f"node id {node_id} out of order (expected {len(nodes)})", line=lineno
                )
            if not (0 <= gx < grid[0] and 0 <= gy < grid[1]):
                raise ScenarioError(f"node {node_id} cell {(gx, gy)} outside grid", line=lineno)
            if (gx, gy) == start:
                raise ScenarioError(f"node {node_id} occupies the uav start cell", line=lineno)
            if prio not in PRIORITY_LEVELS:
                raise ScenarioError(
                    f"node {node_id} priority must be in 1..4, got {prio}", line=lineno
                )
            nodes.append(NodePoint(node_id, (gx, gy), prio))
        else:
            raise ScenarioError(f"unknown directive {kind!r}", line=lineno)
    if grid is None:
        raise ScenarioError("missing grid line")
    if start is None:
        raise ScenarioError("missing start line")
    return Scenario(grid[0], grid[1], grid[2], start, tuple(nodes))


def save_scenario(scenario: Scenario, path) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(scenario_to_text(scenario))
    except OSError as exc:
        raise OSError(f"cannot write scenario file {path}: {exc}") from exc


def load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario(text)
