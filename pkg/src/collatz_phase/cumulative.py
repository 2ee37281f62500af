"""Per-trajectory phase records and the cumulative deviation E_n."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import core
from .phase import CLASSIC, MapFamily, circle_dist, eps, phase


class CompensatedSum:
    """Kahan accumulator; ``value`` is the running sum."""

    __slots__ = ("sum", "compensation")

    def __init__(self, sum: float = 0.0, compensation: float = 0.0):
        self.sum = sum
        self.compensation = compensation

    def add(self, v: float) -> None:
        y = v - self.compensation
        t = self.sum + y
        self.compensation = (t - self.sum) - y
        self.sum = t

    def merge(self, other: "CompensatedSum") -> None:
        # fold the other partial in; callers fix the merge order
        self.add(other.sum)
        self.add(-other.compensation)

    @property
    def value(self) -> float:
        return self.sum

    def __repr__(self):
        return f"CompensatedSum({self.sum!r}, {self.compensation!r})"


@dataclass
class TrajectoryPhaseRecord:
    start: int
    values: list[int] = field(default_factory=list)
    parities: list[int] = field(default_factory=list)
    phases: list[float] = field(default_factory=list)
    eps_seq: list[float] = field(default_factory=list)
    cum_errors: list[float] = field(default_factory=list)
    resolved: bool = False
    overflow: bool = False
    # aggregates stay exact even when the stored sequences are truncated
    n_steps: int = 0
    final_cum: float = 0.0
    max_abs: float = 0.0
    argmax_n: int = 0
    max_residual: float = 0.0
    monotone: bool = True
    truncated: bool = False
    alpha: float = CLASSIC.alpha

    def __len__(self):
        return len(self.values)


def track(x: int, cap: int = core.DEFAULT_CAP, *, fam: MapFamily = CLASSIC,
          follow_cycle: bool = False, store_limit: int = 100_000,
          _state: CompensatedSum | None = None) -> TrajectoryPhaseRecord:
    """Walk the orbit of x, accumulating eps with compensated summation.

    Iteration stops at the first arrival at 1, or after ``cap`` steps. With
    ``follow_cycle`` it continues once around the trivial cycle and stops at
    the next return to 1 (for x = 1 that is the loop 1 -> 4 -> 2 -> 1).
    Sequences beyond ``store_limit`` entries are dropped while the aggregate
    fields keep counting.
    """
    acc = _state if _state is not None else CompensatedSum()
    alpha = fam.alpha
    p0 = phase(fam, x)
    rec = TrajectoryPhaseRecord(start=x, alpha=alpha)
    rec.values.append(x)
    rec.parities.append(x & 1)
    rec.phases.append(p0)
    rec.cum_errors.append(acc.value)
    seen_one = x == 1
    done = seen_one and not follow_cycle
    n = 0
    prev = acc.value
    while not done and n < cap:
        try:
            y = core.gen_step(fam, x)
        except core.Overflow:
            rec.overflow = True
            break
        e = eps(fam, x)
        acc.add(e)
        n += 1
        py = phase(fam, y)
        E = acc.value
        res = circle_dist(py, (p0 + n * alpha + E - (rec.cum_errors[0])) % 1.0)
        rec.max_residual = max(rec.max_residual, res)
        if abs(E) > rec.max_abs:
            rec.max_abs, rec.argmax_n = abs(E), n
        if E <= prev:
            rec.monotone = False
        prev = E
        if len(rec.values) < store_limit:
            rec.values.append(y)
            rec.parities.append(y & 1)
            rec.phases.append(py)
            rec.eps_seq.append(e)
            rec.cum_errors.append(E)
        else:
            rec.truncated = True
        x = y
        if x == 1:
            if seen_one or not follow_cycle:
                done = True
            seen_one = True
    rec.resolved = done
    rec.n_steps = n
    rec.final_cum = acc.value
    return rec


def telescope_residual(rec: TrajectoryPhaseRecord, n: int) -> float:
    """Circle distance between phase_n and phase_0 + n*alpha + E_n."""
    if not 0 <= n < len(rec.values):
        raise IndexError(f"step {n} outside the stored record")
    target = (rec.phases[0] + n * rec.alpha + rec.cum_errors[n] - rec.cum_errors[0]) % 1.0
    return circle_dist(rec.phases[n], target)


def max_abs_cum(rec: TrajectoryPhaseRecord) -> tuple[float, int]:
    """(max_n |E_n|, first n attaining it) over the stored record."""
    if not rec.cum_errors:
        raise ValueError("empty record")
    best, arg = 0.0, 0
    for i, v in enumerate(rec.cum_errors):
        if abs(v) > best:
            best, arg = abs(v), i
    return best, arg


def continue_track(rec: TrajectoryPhaseRecord, cap: int, *, fam: MapFamily = CLASSIC,
                   follow_cycle: bool = False) -> TrajectoryPhaseRecord:
    """Resume tracking from the last stored value of ``rec``.

    The returned record starts at that value with E carried over, so
    concatenating ``rec`` and the continuation (dropping its first entry)
    reproduces a single uninterrupted run.
    """
    # re-derive the accumulator state by replaying the stored eps values
    acc = CompensatedSum()
    for e in rec.eps_seq:
        acc.add(e)
    return track(rec.values[-1], cap, fam=fam, follow_cycle=follow_cycle, _state=acc)


CSV_COLUMNS = ("n", "value", "parity", "phase", "eps", "cum_error")


def record_rows(rec: TrajectoryPhaseRecord):
    for n, v in enumerate(rec.values):
        yield {
            "n": n,
            "value": v,
            "parity": "odd" if rec.parities[n] else "even",
            "phase": rec.phases[n],
            # eps_n is the step that produced value n, matching E_n = E_{n-1} + eps_n
            "eps": rec.eps_seq[n - 1] if n else 0.0,
            "cum_error": rec.cum_errors[n],
        }


def export_csv(rec: TrajectoryPhaseRecord, path: str | Path, digits: int = 7) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for row in record_rows(rec):
            w.writerow([row["n"], row["value"], row["parity"], f"{row['phase']:.{digits}g}",
                        f"{row['eps']:.{digits}g}", f"{row['cum_error']:.{digits}g}"])
    return path


def cycle_eps_sum_value(cycle, fam: MapFamily = CLASSIC) -> float:
    return math.fsum(eps(fam, v) for v in cycle)
