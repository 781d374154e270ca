"""Tabular double Q-learning over (perch cell, priority vector) states.

Two action-value tables take turns: the table whose turn it is picks the
greedy action and receives the update, bootstrapping from the *other*
table's value at its own argmax.  Node coordinates stay out of the state
key because they are constant within a scenario; the key is the UAV's
current perch cell plus the vector of remaining priorities (0 = served).
"""

from dataclasses import dataclass

import numpy as np

from .energy import PowerParams
from .revenue import RevenueWeights
from .env import (
    EpisodeTrace,
    Scenario,
    SimState,
    TraceStep,
    apply_action,
    is_terminal,
)

# StateKey = (uav_cell, priorities): both tuples, hashable and canonical.
StateKey = tuple


def state_key(state: SimState) -> StateKey:
    return (state.uav_cell, state.priorities)


def unserved_actions(key: StateKey) -> list[int]:
    return [i for i, p in enumerate(key[1]) if p > 0]


@dataclass(frozen=True)
class Hyperparams:
    alpha: float = 0.5          # learning rate
    gamma: float = 0.95         # discount per served node
    episodes: int = 8000
    eps_full_until: int = 1000  # fully random exploration before this episode
    eps_zero_at: int = 6400     # exploration reaches zero here

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0 <= self.gamma <= 1:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")
        if self.episodes < 0:
            raise ValueError("episodes must be nonnegative")
        if not 0 <= self.eps_full_until <= self.eps_zero_at:
            raise ValueError("need 0 <= eps_full_until <= eps_zero_at")


def epsilon(schedule, episode: int) -> float:
    """Exploration probability at `episode`: 1 early, 0 late, linear between."""
    if episode < 0:
        raise ValueError("episode index must be nonnegative")
    if episode >= schedule.eps_zero_at:
        return 0.0
    if episode < schedule.eps_full_until:
        return 1.0
    span = schedule.eps_zero_at - schedule.eps_full_until
    return (schedule.eps_zero_at - episode) / span


class QTablePair:
    """The two action-value maps plus which one the next update writes.

    Tables map (StateKey, action) -> value; unseen pairs read as 0.
    """

    def __init__(self, selector: str = "A"):
        if selector not in ("A", "B"):
            raise ValueError(f"selector must be 'A' or 'B', got {selector!r}")
        self.table_a: dict = {}
        self.table_b: dict = {}
        self.selector = selector

    def active_table(self) -> dict:
        return self.table_a if self.selector == "A" else self.table_b

    def other_table(self) -> dict:
        return self.table_b if self.selector == "A" else self.table_a

    def toggle(self) -> None:
        self.selector = "B" if self.selector == "A" else "A"

    def copy(self) -> "QTablePair":
        clone = QTablePair(self.selector)
        clone.table_a = dict(self.table_a)
        clone.table_b = dict(self.table_b)
        return clone

    def mean_value(self, key: StateKey, action: int) -> float:
        return (self.table_a.get((key, action), 0.0) + self.table_b.get((key, action), 0.0)) / 2.0


def _argmax(table: dict, key: StateKey, actions) -> int:
    """Greedy action in `table`; ties break toward the lowest node id."""
    best, best_v = None, None
    for a in actions:
        v = table.get((key, a), 0.0)
        if best is None or v > best_v:
            best, best_v = a, v
    return best


def select_action(tables: QTablePair, key: StateKey, eps: float, rng) -> int:
    """Epsilon-greedy pick among the unserved nodes of `key`.

    Exploration is uniform; exploitation is the argmax of whichever table
    is due to update next.  Always draws the exploration coin so the rng
    stream advances the same way regardless of eps.
    """
    actions = unserved_actions(key)
    if not actions:
        raise ValueError("no unserved node to select in a terminal state")
    if rng.random() < eps:
        return actions[int(rng.integers(len(actions)))]
    return _argmax(tables.active_table(), key, actions)


def update(
    tables: QTablePair,
    s: StateKey,
    a: int,
    r: float,
    s_next: StateKey,
    terminal: bool,
    hp,
) -> None:
    """One double-Q update on the selector's table, then toggle the selector.

    The selector's own table chooses the successor argmax; the bootstrap
    value comes from the other table at that action.  Terminal successors
    bootstrap 0.  Operation order is fixed (scale old, add scaled target)
    so reruns are bit-reproducible.
    """
    own = tables.active_table()
    other = tables.other_table()
    if terminal:
        bootstrap = 0.0
    else:
        a_star = _argmax(own, s_next, unserved_actions(s_next))
        bootstrap = other.get((s_next, a_star), 0.0)
    old = own.get((s, a), 0.0)
    own[(s, a)] = (1.0 - hp.alpha) * old + hp.alpha * (r + hp.gamma * bootstrap)
    tables.toggle()


def run_episode(
    scenario: Scenario,
    tables: QTablePair,
    hp: Hyperparams,
    episode: int,
    rng,
    power_params: PowerParams | None = None,
    weights: RevenueWeights | None = None,
) -> EpisodeTrace:
    """Serve every node once, learning after each service.

    Exactly n updates are applied, alternating tables from whichever the
    pair's selector currently points at.
    """
    eps = epsilon(hp, episode)
    state = scenario.initial_state()
    steps = []
    k = 0
    while not is_terminal(state):
        s_key = state_key(state)
        a = select_action(tables, s_key, eps, rng)
        prio = state.priorities[a]
        tr = apply_action(scenario, state, a, power_params, weights)
        s_next_key = state_key(tr.next_state)
        update(tables, s_key, a, tr.revenue, s_next_key, is_terminal(tr.next_state), hp)
        steps.append(
            TraceStep(k, a, prio, tr.t_s, tr.distance, tr.energy, tr.revenue,
                      tr.next_state.clock)
        )
        state = tr.next_state
        k += 1
    return EpisodeTrace(tuple(steps))


@dataclass(frozen=True)
class CurvePoint:
    episode: int
    accumulated_revenue: float   # sum of per-step revenue over the episode
    total_energy: float          # J spent flying this episode
    epsilon: float


def train(
    scenario: Scenario,
    hp: Hyperparams | None = None,
    seed: int = 0,
    power_params: PowerParams | None = None,
    weights: RevenueWeights | None = None,
) -> tuple[QTablePair, list[CurvePoint]]:
    """Run the full training schedule; deterministic for a fixed seed."""
    if hp is None:
        hp = Hyperparams()
    rng = np.random.default_rng(seed)
    tables = QTablePair()
    curve = []
    for ep in range(hp.episodes):
        trace = run_episode(scenario, tables, hp, ep, rng, power_params, weights)
        curve.append(CurvePoint(ep, trace.total_revenue, trace.total_energy, epsilon(hp, ep)))
    return tables, curve


def evaluate_policy(
    scenario: Scenario,
    tables: QTablePair,
    power_params: PowerParams | None = None,
    weights: RevenueWeights | None = None,
) -> EpisodeTrace:
    """Greedy rollout of the learned policy; leaves the tables untouched.

    Actions maximize the elementwise mean of the two tables (unseen pairs
    read 0), ties toward the lowest node id.
    """
    state = scenario.initial_state()
    steps = []
    k = 0
    while not is_terminal(state):
        key = state_key(state)
        best, best_v = None, None
        for a in unserved_actions(key):
            v = tables.mean_value(key, a)
            if best is None or v > best_v:
                best, best_v = a, v
        prio = state.priorities[best]
        tr = apply_action(scenario, state, best, power_params, weights)
        steps.append(
            TraceStep(k, best, prio, tr.t_s, tr.distance, tr.energy, tr.revenue,
                      tr.next_state.clock)
        )
        state = tr.next_state
        k += 1
    return EpisodeTrace(tuple(steps))


# ---------------------------------------------------------------------------
# Table persistence: one text row per stored value,
#   A|B <uav_loc> <priority_vec> <action> <value>
# e.g. "A 3,4 0,2,0,1,4,3 2 -123.5".  Rows are sorted lexicographically so
# dumps diff cleanly between runs.
# ---------------------------------------------------------------------------

def _format_row(label: str, key: StateKey, action: int, value: float) -> str:
    (gx, gy), priorities = key
    loc = f"{gx},{gy}"
    vec = ",".join(str(p) for p in priorities)
    return f"{label} {loc} {vec} {action} {value!r}"


def tables_to_text(tables: QTablePair) -> str:
    rows = []
    for label, table in (("A", tables.table_a), ("B", tables.table_b)):
        for (key, action), value in table.items():
            rows.append(_format_row(label, key, action, value))
    rows.sort()
    return "\n".join(rows) + ("\n" if rows else "")


def parse_tables(text: str) -> QTablePair:
    tables = QTablePair()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5 or fields[0] not in ("A", "B"):
            raise ValueError(f"table dump line {lineno}: expected 'A|B loc vec action value'")
        try:
            gx, gy = (int(t) for t in fields[1].split(","))
            vec = tuple(int(t) for t in fields[2].split(","))
            action = int(fields[3])
            value = float(fields[4])
        except ValueError:
            raise ValueError(f"table dump line {lineno}: bad field values") from None
        key = ((gx, gy), vec)
        table = tables.table_a if fields[0] == "A" else tables.table_b
        table[(key, action)] = value
    return tables


def save_tables(tables: QTablePair, path) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(tables_to_text(tables))
    except OSError as exc:
        raise OSError(f"cannot write table dump {path}: {exc}") from exc


def load_tables(path) -> QTablePair:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read table dump {path}: {exc}") from exc
    return parse_tables(text)
