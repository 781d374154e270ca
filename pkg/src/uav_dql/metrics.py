"""Derived quantities and CSV emission for traces and training curves.

All writers emit plot-ready CSV with '\n' line endings and repr-of-float
cells, so identical runs produce byte-identical files.
"""

from dataclasses import dataclass

from .env import EpisodeTrace, Scenario, TraceStep
from .learner import CurvePoint

TRACE_HEADER = "step,node_id,priority,t_s_s,distance_m,energy_J,revenue,clock_s"
CURVE_HEADER = "episode,accumulated_revenue,total_energy_J,epsilon"
DELAY_HEADER = "class,count,mean_delay_s"


@dataclass(frozen=True)
class ClassDelay:
    count: int
    mean_delay: float   # seconds from episode start to service, class mean


@dataclass(frozen=True)
class DelayReport:
    """Mean serving delay per priority class, plus the mission's energy.

    `classes` holds an entry only for priority levels present in the
    scenario; absent classes are simply missing rather than zero.
    """

    classes: dict[int, ClassDelay]
    total_energy: float


def delay_report(trace: EpisodeTrace, scenario: Scenario) -> DelayReport:
    """Per-priority-class mean serving delay of a complete trace."""
    if not trace.is_complete(scenario):
        raise ValueError("trace does not serve every node exactly once")
    delays_by_class: dict[int, list[float]] = {}
    served_clock = trace.delays
    for node in scenario.nodes:
        delays_by_class.setdefault(node.priority, []).append(served_clock[node.id])
    classes = {
        prio: ClassDelay(len(d), sum(d) / len(d))
        for prio, d in sorted(delays_by_class.items())
    }
    return DelayReport(classes, trace.total_energy)


# ---------------------------------------------------------------------------
# CSV writers/readers
# ---------------------------------------------------------------------------

def _write(path, lines) -> None:
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _read_lines(path) -> list[str]:
    try:
        with open(path) as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc


def trace_csv_lines(trace: EpisodeTrace) -> list[str]:
    lines = [TRACE_HEADER]
    for s in trace.steps:
        lines.append(
            f"{s.step},{s.node_id},{s.priority},{s.t_s!r},{s.distance!r},"
            f"{s.energy!r},{s.revenue!r},{s.clock!r}"
        )
    return lines


def write_trace_csv(trace: EpisodeTrace, path) -> None:
    _write(path, trace_csv_lines(trace))


def read_trace_csv(path) -> EpisodeTrace:
    lines = _read_lines(path)
    if not lines or lines[0] != TRACE_HEADER:
        raise ValueError(f"{path}: missing trace header {TRACE_HEADER!r}")
    steps = []
    for line in lines[1:]:
        if not line:
            continue
        f = line.split(",")
        steps.append(
            TraceStep(int(f[0]), int(f[1]), int(f[2]), float(f[3]), float(f[4]),
                      float(f[5]), float(f[6]), float(f[7]))
        )
    return EpisodeTrace(tuple(steps))


def _trailing_mean(values: list[float], window: int, k: int) -> float | None:
    if k + 1 < window:
        return None   # no partial windows
    return sum(values[k + 1 - window : k + 1]) / window


def curve_csv_lines(curve: list[CurvePoint], smooth_window: int | None = None) -> list[str]:
    """Training-curve rows; optional trailing moving-average columns.

    With a window w the smoothed columns stay empty for the first w-1
    episodes; w=1 reproduces the raw columns.
    """
    header = CURVE_HEADER
    if smooth_window is not None:
        if smooth_window < 1:
            raise ValueError("smoothing window must be >= 1")
        header += ",accumulated_revenue_smoothed,total_energy_J_smoothed"
    lines = [header]
    revenues = [p.accumulated_revenue for p in curve]
    energies = [p.total_energy for p in curve]
    for k, p in enumerate(curve):
        row = f"{p.episode},{p.accumulated_revenue!r},{p.total_energy!r},{p.epsilon!r}"
        if smooth_window is not None:
            rev_ma = _trailing_mean(revenues, smooth_window, k)
            en_ma = _trailing_mean(energies, smooth_window, k)
            row += f",{'' if rev_ma is None else repr(rev_ma)}"
            row += f",{'' if en_ma is None else repr(en_ma)}"
        lines.append(row)
    return lines


def write_curve_csv(curve: list[CurvePoint], path, smooth_window: int | None = None) -> None:
    _write(path, curve_csv_lines(curve, smooth_window))


def read_curve_csv(path) -> list[CurvePoint]:
    lines = _read_lines(path)
    if not lines or not lines[0].startswith(CURVE_HEADER):
        raise ValueError(f"{path}: missing curve header {CURVE_HEADER!r}")
    curve = []
    for line in lines[1:]:
        if not line:
            continue
        f = line.split(",")
        curve.append(CurvePoint(int(f[0]), float(f[1]), float(f[2]), float(f[3])))
    return curve


def delay_csv_lines(report: DelayReport) -> list[str]:
    """Delay-report rows: one per priority class 1..4, then an energy footer.

    Classes absent from the scenario keep an empty mean cell (count 0).
    """
    lines = [DELAY_HEADER]
    for prio in (1, 2, 3, 4):
        entry = report.classes.get(prio)
        if entry is None:
            lines.append(f"{prio},0,")
        else:
            lines.append(f"{prio},{entry.count},{entry.mean_delay!r}")
    lines.append(f"total_energy_J,{report.total_energy!r}")
    return lines


def write_delay_csv(report: DelayReport, path) -> None:
    _write(path, delay_csv_lines(report))
