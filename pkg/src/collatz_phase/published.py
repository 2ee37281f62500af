"""Side-by-side comparison of recomputed quantities with published table values.

The published numbers live in ``data/published_values.csv`` together with a
citation string per value; nothing here hardcodes them. A value counts as
reproduced when the recomputed quantity rounds to it, i.e. lies within half a
unit in the last printed digit.
"""
from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import asdict, dataclass, field
from decimal import Decimal
from importlib import resources
from typing import Sequence

from . import core
from .analytics import CycleRow, SpectralEstimates, ZoneReport
from .cumulative import TrajectoryPhaseRecord
from .flow import FlowRow
from .phase import CLASSIC, MapFamily, eps, frac, phase, series_coefficients
from .survey import CumulativeSweepReport, RangeReport, ScanResult


CYCLE_TOL = 1e-6


class UnknownCounterpart(TypeError):
    """No published table corresponds to this kind of report."""


@dataclass(frozen=True)
class PublishedValue:
    table: str
    key: str
    column: str
    text: str
    citation: str

    @property
    def value(self) -> float:
        return float(self.text)

    @property
    def tolerance(self) -> float:
        return 0.5 * 10.0 ** Decimal(self.text).as_tuple().exponent


@functools.lru_cache(maxsize=1)
def load_published() -> tuple[PublishedValue, ...]:
    raw = resources.files("collatz_phase").joinpath("data/published_values.csv").read_text("utf-8")
    return tuple(PublishedValue(r["table"], r["key"], r["column"], r["value"], r["citation"])
                 for r in csv.DictReader(io.StringIO(raw)))


def published_table(table: str) -> dict[tuple[str, str], PublishedValue]:
    return {(v.key, v.column): v for v in load_published() if v.table == table}


@dataclass
class Cell:
    table: str
    key: str
    column: str
    published: float
    computed: float
    abs_diff: float
    tolerance: float
    match: bool
    citation: str


@dataclass
class DiscrepancyReport:
    cells: list[Cell] = field(default_factory=list)

    @property
    def matched(self) -> int:
        return sum(c.match for c in self.cells)

    @property
    def mismatched(self) -> int:
        return len(self.cells) - self.matched

    def tables(self) -> list[str]:
        return sorted({c.table for c in self.cells})

    def for_table(self, table: str) -> "DiscrepancyReport":
        return DiscrepancyReport([c for c in self.cells if c.table == table])

    def extend(self, other: "DiscrepancyReport") -> "DiscrepancyReport":
        self.cells.extend(other.cells)
        return self

    def summary(self) -> dict:
        per = {}
        for t in self.tables():
            sub = self.for_table(t)
            per[t] = {"cells": len(sub.cells), "matched": sub.matched, "mismatched": sub.mismatched}
        return {"cells": len(self.cells), "matched": self.matched,
                "mismatched": self.mismatched, "tables": per}

    def rows(self):
        for c in self.cells:
            yield (c.table, c.key, c.column, c.published, c.computed, c.abs_diff, c.tolerance,
                   c.match, c.citation)

    def to_dict(self) -> dict:
        return {"summary": self.summary(), "cells": [asdict(c) for c in self.cells]}


def _compare(table: str, computed: dict[tuple[str, str], float],
             tolerance: float | None = None) -> DiscrepancyReport:
    """Per-cell comparison; ``tolerance`` overrides the half-unit rounding rule."""
    pub = published_table(table)
    rep = DiscrepancyReport()
    for k, pv in pub.items():
        if k not in computed or computed[k] is None:
            continue
        v = float(computed[k])
        tol = pv.tolerance if tolerance is None else max(tolerance, pv.tolerance)
        diff = abs(v - pv.value) if math.isfinite(v) else math.inf
        rep.cells.append(Cell(table, k[0], k[1], pv.value, v, diff, tol, diff <= tol,
                              pv.citation))
    return rep


def _key_matches(key: str, value: float) -> bool:
    try:
        return abs(float(key) - value) < 1e-12
    except ValueError:
        return False


# ---------------------------------------------------------------- helper reports

@dataclass
class EpsTable:
    """|eps(x)| for consecutive x."""

    xs: list[int]
    values: list[float]


def eps_table(lo: int = 1, hi: int = 100) -> EpsTable:
    xs = list(range(lo, hi + 1))
    return EpsTable(xs, [abs(eps(CLASSIC, x)) for x in xs])


@dataclass
class PhasePoints:
    xs: list[int]
    phases: list[float]
    terras: list[core.Count]


def phase_points(xs: Sequence[int]) -> PhasePoints:
    return PhasePoints(list(xs), [phase(CLASSIC, x) for x in xs],
                       [core.terras_stopping_time(x) for x in xs])


@dataclass
class AsymptoticCoefficients:
    """c1..c3 of eps ~ sum c_i / y^i for x = 2y (even) and x = 2y + 1 (odd)."""

    even: tuple[float, float, float]
    odd: tuple[float, float, float]


def asymptotic_coefficients() -> AsymptoticCoefficients:
    return AsymptoticCoefficients(series_coefficients("even"), series_coefficients("odd"))


# ---------------------------------------------------------------- dispatch

def _cycles(rows: list[CycleRow]) -> DiscrepancyReport:
    comp = {}
    for r in rows:
        k = str(r.p)
        comp.update({(k, "p_alpha"): r.p_alpha, (k, "m"): r.m, (k, "residue"): r.residue,
                     (k, "bound"): r.bound})
    # the printed p = 8 row truncates rather than rounds, so cells match to 1e-6
    return _compare("cycle-test", comp, CYCLE_TOL)


def _flows(rows: list[FlowRow]) -> DiscrepancyReport:
    comp = {}
    for r in rows:
        comp[(str(r.x), "flow1")] = r.corrected
        comp[(str(r.x), "gap")] = abs(r.cx - r.corrected)
    return _compare("continuous-comparison", comp)


def _zones(rows: list[ZoneReport]) -> DiscrepancyReport:
    rep = DiscrepancyReport()
    for table, cols in (("termination-zone", ("member_fraction", "max_steps", "mean_steps")),
                        ("basin-parameters", ("max_steps", "mean_steps"))):
        keys = {k for k, _ in published_table(table)}
        comp = {}
        for r in rows:
            for k in keys:
                if _key_matches(k, r.delta):
                    vals = {"member_fraction": r.member_fraction, "max_steps": r.max_steps_to_1,
                            "mean_steps": r.mean_steps_to_1}
                    comp.update({(k, c): vals[c] for c in cols})
        rep.extend(_compare(table, comp))
    return rep


def _orbits(rows: list[core.OrbitStats]) -> DiscrepancyReport:
    comp, terras = {}, {}
    for r in rows:
        k = str(r.start)
        comp.update({(k, "max_odd_run"): r.max_odd_run, (k, "peak"): r.peak,
                     (k, "peak_ratio"): r.peak_ratio})
        if isinstance(r.terras_steps, int):
            terras[(k, "terras")] = r.terras_steps
    return _compare("divergence-test", comp).extend(_compare("terras-comparison", terras))


def _families(fams: list[MapFamily]) -> DiscrepancyReport:
    comp = {}
    for f in fams:
        comp[(f.label().strip("()"), "alpha")] = f.alpha
    return _compare("generalized-maps", comp)


def _range_key(lo: int, hi: int) -> str | None:
    a, b = math.log10(lo), math.log10(hi)
    if a.is_integer() and round(b, 6).is_integer():
        return f"1e{int(a)}-1e{int(round(b))}"
    return None


def _ranges(reports: list[RangeReport]) -> DiscrepancyReport:
    rep = DiscrepancyReport()
    large, fams = {}, {}
    for r in reports:
        k = _range_key(r.lo, r.hi + 1) or _range_key(r.lo, r.hi)
        if k and r.family == "(3,1)":
            large[(k, "max_abs_eps")] = r.max_abs_eps
            # the printed ratio is against 0.0558/x at the lower end of the range
            large[(k, "ratio")] = r.max_abs_eps / (0.0558 / r.lo)
        if r.lo == 1:
            fams[(r.family.strip("()"), "max_abs_eps")] = r.max_abs_eps
    rep.extend(_compare("large-scale-verification", large))
    rep.extend(_compare("generalized-maps", fams))
    for r in reports:
        if r.lo == 1 and r.family == "(3,1)":
            rep.extend(_single_range(r))
    return rep


def _single_range(r: RangeReport) -> DiscrepancyReport:
    q = lambda p: r.sketch.quantile(p)  # noqa: E731
    stats = {("mean", "tier1"): r.mean_abs_eps, ("median", "tier1"): q(0.5),
             ("std", "tier1"): r.std_abs_eps, ("max", "tier1"): r.max_abs_eps,
             ("99.9", "tier1"): q(0.999)}
    dist = {(k, "abs_eps"): q(float(k) / 100) for k in ("50", "75", "90", "95", "99", "99.9")}
    dist[("max", "abs_eps")] = r.max_abs_eps
    quant = {(k, "abs_eps"): q(float(k)) for k in
             ("0.01", "0.05", "0.1", "0.25", "0.5", "0.75", "0.9", "0.95", "0.99", "0.999")}
    quant.update({("min", "abs_eps"): r.min_abs_eps, ("max", "abs_eps"): r.max_abs_eps,
                  ("mean", "abs_eps"): r.mean_abs_eps, ("std", "abs_eps"): r.std_abs_eps})
    rep = _compare("error-statistics-full", stats)
    rep.extend(_compare("error-distribution", dist))
    return rep.extend(_compare("app-error-quantiles", quant))


def _sweep(r: CumulativeSweepReport) -> DiscrepancyReport:
    short, detailed = {}, {}
    col = {10**3: "1e3", 10**4: "1e4", 10**5: "1e5", 10**6: "1e6"}.get(r.hi) if r.lo == 1 else None
    for d, v, x in r.depth_sups:
        short[(str(d), "max_abs_cum")] = v
        short[(str(d), "argmax_x")] = x
        if col:
            detailed[(str(d), col)] = v
    short[("all", "max_abs_cum")] = r.sup_abs_cum
    short[("all", "argmax_x")] = r.argmax_x
    if col:
        detailed[("all", col)] = r.sup_abs_cum
    return _compare("cumulative-error", short).extend(_compare("cumulative-error-detailed", detailed))


def _trajectory(rec: TrajectoryPhaseRecord) -> DiscrepancyReport:
    table = {27: "app-trajectory-27", 97: "app-trajectory-97"}.get(rec.start)
    if table is None:
        raise UnknownCounterpart(f"no published trajectory table for x={rec.start}")
    comp = {}
    for n, v in enumerate(rec.values):
        k = str(n)
        comp.update({(k, "value"): v, (k, "phase"): rec.phases[n],
                     (k, "rotation"): frac(rec.phases[0] + n * rec.alpha),
                     (k, "eps"): rec.eps_seq[n - 1] if n else 0.0,
                     (k, "cum_error"): rec.cum_errors[n]})
    return _compare(table, comp)


def _scan(res: ScanResult) -> DiscrepancyReport:
    comp = {}
    pub = published_table("param-optim")
    ranks = sorted({k for k, _ in pub}, key=int)
    by_ab = {(round(c.a, 6), round(c.b, 6)): c for c in res.cells}
    if res.best is not None:
        comp.update({("1", "a"): res.best.a, ("1", "b"): res.best.b})
    for rk in ranks:
        ab = (round(pub[(rk, "a")].value, 6), round(pub[(rk, "b")].value, 6))
        cell = by_ab.get(ab)
        if cell is not None:
            comp.update({(rk, "max_dev"): cell.sup_dev, (rk, "mean_dev"): cell.mean_dev})
    return _compare("param-optim", comp)


def _spectral(s: SpectralEstimates) -> DiscrepancyReport:
    comp = {(",".join(map(str, I)), "abs_a"): abs(v) for I, v in s.walsh if I}
    return _compare("walsh-coefficients", comp)


def _eps_table(t: EpsTable) -> DiscrepancyReport:
    return _compare("app-error-full", {(str(x), "abs_eps"): v for x, v in zip(t.xs, t.values)})


def _phases(p: PhasePoints) -> DiscrepancyReport:
    comp = {(str(x), "phase"): v for x, v in zip(p.xs, p.phases)}
    comp.update({(str(x), "terras"): t for x, t in zip(p.xs, p.terras) if isinstance(t, int)})
    return _compare("terras-comparison", comp)


def _coeffs(c: AsymptoticCoefficients) -> DiscrepancyReport:
    comp = {}
    for par, vals in (("even", c.even), ("odd", c.odd)):
        comp.update({(par, f"c{i + 1}"): v for i, v in enumerate(vals)})
    return _compare("error-asymptotics", comp)


_SINGLE = {
    RangeReport: lambda r: _ranges([r]),
    CumulativeSweepReport: _sweep,
    TrajectoryPhaseRecord: _trajectory,
    ScanResult: _scan,
    SpectralEstimates: _spectral,
    EpsTable: _eps_table,
    PhasePoints: _phases,
    AsymptoticCoefficients: _coeffs,
}
_LISTS = {
    CycleRow: _cycles,
    FlowRow: _flows,
    ZoneReport: _zones,
    core.OrbitStats: _orbits,
    MapFamily: _families,
    RangeReport: _ranges,
}


def compare_paper(report) -> DiscrepancyReport:
    """Match a report against every published table that covers it."""
    if isinstance(report, (list, tuple)):
        if not report:
            raise UnknownCounterpart("empty report list")
        kind = type(report[0])
        if kind in _LISTS and all(isinstance(r, kind) for r in report):
            return _LISTS[kind](list(report))
        raise UnknownCounterpart(f"no published counterpart for lists of {kind.__name__}")
    fn = _SINGLE.get(type(report))
    if fn is None:
        raise UnknownCounterpart(f"no published counterpart for {type(report).__name__}")
    return fn(report)
