"""Range sweeps, sampling and the (a, b) transform grid scan.

Every parallel sweep cuts its range into fixed blocks of ``block`` integers,
evaluates the blocks in any order and merges the partial results strictly by
block index. The worker count therefore never changes a single bit of the
output.
"""
from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import core, kernels
from .cumulative import CompensatedSum
from .phase import CLASSIC, MapFamily, eps, frac, phase

BLOCK = 1 << 16
HIST_WIDTH = 1e-3
HIST_BINS = 500  # [0, 0.5] plus one overflow bin
DEFAULT_DEPTHS = (10, 50, 100, 500, 1000, 5000)


class EmptyRange(ValueError):
    pass


class DegenerateMean(ArithmeticError):
    """The unit vectors cancel, so the circular mean has no direction."""


def default_workers() -> int:
    env = os.environ.get("COLLATZ_PHASE_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def partition(lo: int, hi: int, block: int = BLOCK) -> list[tuple[int, int]]:
    if lo > hi:
        raise EmptyRange(f"empty range [{lo}, {hi}]")
    return [(s, min(s + block - 1, hi)) for s in range(lo, hi + 1, block)]


def _run_blocks(fn, tasks, workers):
    # results always come back in task order
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


# ---------------------------------------------------------------- sketches

@dataclass
class HistogramSketch:
    """Fixed-width histogram of |eps| over [0, 0.5]; mergeable and exact per bin."""

    width: float = HIST_WIDTH
    counts: list[int] = field(default_factory=lambda: [0] * (HIST_BINS + 1))
    lo_value: float = math.inf
    hi_value: float = -math.inf

    @property
    def total(self) -> int:
        return sum(self.counts)

    def merge(self, other: "HistogramSketch") -> None:
        self.counts = [a + b for a, b in zip(self.counts, other.counts)]
        self.lo_value = min(self.lo_value, other.lo_value)
        self.hi_value = max(self.hi_value, other.hi_value)

    def quantile(self, q: float) -> float:
        """Nearest-rank quantile, resolved to the upper edge of its bin.

        The true sample quantile lies within one bin width below the
        returned value; the result is clamped into [min, max] of the data.
        """
        n = self.total
        if n == 0:
            raise EmptyRange("empty sketch")
        if not 0.0 <= q <= 1.0:
            raise ValueError("q must lie in [0, 1]")
        rank = max(1, math.ceil(q * n))
        seen = 0
        for i, c in enumerate(self.counts):
            seen += c
            if seen >= rank:
                edge = (i + 1) * self.width if i < len(self.counts) - 1 else self.hi_value
                return min(max(edge, self.lo_value), self.hi_value)
        return self.hi_value

    def quantiles(self, qs: Sequence[float]) -> list[float]:
        return [self.quantile(q) for q in qs]


@dataclass
class RangeReport:
    lo: int
    hi: int
    count: int
    max_abs_eps: float
    argmax_x: int
    min_abs_eps: float
    argmin_x: int
    mean_abs_eps: float
    std_abs_eps: float
    sketch: HistogramSketch
    overflow_count: int = 0
    family: str = "(3,1)"

    def quantiles(self, qs=(0.5, 0.9, 0.99, 0.999, 1.0)) -> dict[float, float]:
        return dict(zip(qs, self.sketch.quantiles(qs)))

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("sketch")
        d["quantiles"] = {str(k): v for k, v in self.quantiles().items()}
        return d


def _eps_task(args):
    lo, hi, p, impl_name = args
    impl = kernels.pure if impl_name == "python" else kernels.for_range(hi)
    return impl.eps_block(lo, hi, p["mult"], p["add"], p["k"], p["logk"], p["logbase"],
                          p["alpha"], p["branch_from"], HIST_BINS, HIST_WIDTH)


def _merge_eps_blocks(lo, hi, parts, fam) -> RangeReport:
    count = ovf = 0
    mx, mn = -1.0, math.inf
    amx = amn = lo
    s_abs, s_sq = CompensatedSum(), CompensatedSum()
    sk = HistogramSketch()
    for (c, bmx, bamx, bmn, bamn, sa, ca, sq, cq, hist, bo) in parts:
        ovf += int(bo)
        if c == 0:
            continue
        count += int(c)
        if bmx > mx:
            mx, amx = bmx, int(bamx)
        if bmn < mn:
            mn, amn = bmn, int(bamn)
        s_abs.merge(CompensatedSum(sa, ca))
        s_sq.merge(CompensatedSum(sq, cq))
        sk.counts = [a + int(b) for a, b in zip(sk.counts, hist)]
    if count == 0:
        return RangeReport(lo, hi, 0, math.nan, lo, math.nan, lo, math.nan, math.nan, sk, ovf,
                           fam.label())
    sk.lo_value, sk.hi_value = mn, mx
    mean = s_abs.value / count
    var = max(s_sq.value / count - mean * mean, 0.0)
    return RangeReport(lo, hi, count, mx, amx, mn, amn, mean, math.sqrt(var), sk, ovf, fam.label())


def exhaustive_verify(lo: int, hi: int, fam: MapFamily = CLASSIC, *, workers: int | None = None,
                      block: int = BLOCK, backend: str | None = None) -> RangeReport:
    """Exact max, argmax, mean and histogram of |eps| over every x in [lo, hi]."""
    if lo < 1:
        raise ValueError("lo must be >= 1")
    p = fam.kernel_params()
    tasks = [(a, b, p, backend) for a, b in partition(lo, hi, block)]
    parts = _run_blocks(_eps_task, tasks, workers or default_workers())
    return _merge_eps_blocks(lo, hi, parts, fam)


# ---------------------------------------------------------------- sampling

SCHEMES = ("exhaustive", "uniform", "stratified")


@dataclass(frozen=True)
class SampleSpec:
    """Inclusive range [lo, hi] and how to draw n values from it."""

    lo: int
    hi: int
    n: int = 0
    seed: int = 0
    scheme: str = "exhaustive"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.lo < 1:
            raise ValueError("lo must be >= 1")
        if self.lo > self.hi:
            raise EmptyRange(f"empty range [{self.lo}, {self.hi}]")
        if self.scheme != "exhaustive" and self.n < 1:
            raise EmptyRange("sampling schemes need n >= 1")


def decades(lo: int, hi: int) -> list[tuple[int, int]]:
    """[10^k, 10^(k+1) - 1] pieces of [lo, hi], clipped to the range."""
    out = []
    k = len(str(lo)) - 1
    while 10**k <= hi:
        a, b = max(lo, 10**k), min(hi, 10 ** (k + 1) - 1)
        if a <= b:
            out.append((a, b))
        k += 1
    return out


def stratified_sample(spec: SampleSpec) -> list[int]:
    """Deterministic sample described by ``spec``.

    The stratified scheme splits n evenly over the decades met by the range,
    the remainder going one each to the lowest decades, and draws uniformly
    with replacement inside each decade.
    """
    if spec.scheme == "exhaustive":
        return list(range(spec.lo, spec.hi + 1))
    rng = random.Random(spec.seed)
    if spec.scheme == "uniform":
        return [rng.randint(spec.lo, spec.hi) for _ in range(spec.n)]
    parts = decades(spec.lo, spec.hi)
    q, r = divmod(spec.n, len(parts))
    out: list[int] = []
    for i, (a, b) in enumerate(parts):
        out.extend(rng.randint(a, b) for _ in range(q + (1 if i < r else 0)))
    return out


def sample_array(spec: SampleSpec) -> np.ndarray:
    if spec.scheme == "exhaustive":
        return np.arange(spec.lo, spec.hi + 1, dtype=np.uint64)
    return np.asarray(stratified_sample(spec), dtype=np.uint64)


def sample_eps(xs: Sequence[int], fam: MapFamily = CLASSIC) -> np.ndarray:
    """eps(x) for each x, through the kernel when the family allows it."""
    p = fam.kernel_params()
    if len(xs) and max(xs) > kernels.KERNEL_LIMIT:
        out = []
        for x in xs:
            try:
                out.append(eps(fam, int(x)))
            except core.Overflow:
                out.append(math.nan)
        return np.asarray(out, dtype=np.float64)
    arr = np.asarray(xs, dtype=np.uint64)
    impl = kernels.for_range(int(arr.max()) if len(arr) else 0)
    e, _, bad = impl.orbit_eps_matrix(arr, 1, p["k"], p["add"], p["logk"], p["logbase"],
                                      p["alpha"], p["branch_from"])
    out = e[:, 0].copy()
    out[bad.astype(bool)] = np.nan
    return out


def sample_verify(spec: SampleSpec, fam: MapFamily = CLASSIC) -> RangeReport:
    """Like :func:`exhaustive_verify` but over a drawn sample."""
    if spec.scheme == "exhaustive":
        return exhaustive_verify(spec.lo, spec.hi, fam)
    xs = stratified_sample(spec)
    e = np.abs(sample_eps(xs, fam))
    ok = ~np.isnan(e)
    sk = HistogramSketch()
    acc, acc2 = CompensatedSum(), CompensatedSum()
    mx, mn, amx, amn = -1.0, math.inf, spec.lo, spec.lo
    for x, v in zip(xs, e.tolist()):
        if math.isnan(v):
            continue
        acc.add(v)
        acc2.add(v * v)
        sk.counts[min(int(v / HIST_WIDTH), HIST_BINS)] += 1
        if v > mx or (v == mx and x < amx):
            mx, amx = v, x
        if v < mn or (v == mn and x < amn):
            mn, amn = v, x
    count = int(ok.sum())
    if count == 0:
        raise EmptyRange("no sample value could be evaluated")
    sk.lo_value, sk.hi_value = mn, mx
    mean = acc.value / count
    std = math.sqrt(max(acc2.value / count - mean * mean, 0.0))
    return RangeReport(spec.lo, spec.hi, count, mx, amx, mn, amn, mean, std, sk,
                       len(xs) - count, fam.label())


# ---------------------------------------------------------------- trajectories

@dataclass
class CumulativeSweepReport:
    lo: int
    hi: int
    cap: int
    follow_cycle: bool
    sup_abs_cum: float
    argmax_x: int
    argmax_n: int
    max_residual: float
    residual_x: int
    depth_sups: list[tuple[int, float, int]]
    unresolved: int
    overflow: int
    max_steps: int
    argmax_steps_x: int
    steps: np.ndarray = field(repr=False, default=None)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("steps")
        d["depth_sups"] = [list(t) for t in self.depth_sups]
        return d


def _orbit_task(args):
    lo, hi, cap, p, follow, depths, impl_name = args
    impl = kernels.pure if impl_name == "python" else kernels.for_range(hi)
    return impl.orbit_block(lo, hi, cap, p["mult"], p["add"], p["k"], p["logk"], p["logbase"],
                            p["alpha"], p["branch_from"], follow, np.asarray(depths, dtype=np.int64))


def trajectory_sweep(lo: int, hi: int, cap: int = core.SWEEP_CAP, *, fam: MapFamily = CLASSIC,
                     follow_cycle: bool = False, workers: int | None = None,
                     depths: Sequence[int] = DEFAULT_DEPTHS, block: int = BLOCK,
                     backend: str | None = None) -> CumulativeSweepReport:
    """sup over starts in [lo, hi] of max_n |E_n|, with telescoping residuals.

    ``depth_sups`` holds, for each depth d, the sup over x of max_{n <= d} |E_n|
    and the first x attaining it.
    """
    if lo < 1:
        raise ValueError("lo must be >= 1")
    p = fam.kernel_params()
    depths = sorted(int(d) for d in depths)
    tasks = [(a, b, cap, p, follow_cycle, depths, backend) for a, b in partition(lo, hi, block)]
    parts = _run_blocks(_orbit_task, tasks, workers or default_workers())
    sup, sx, sn = -1.0, lo, 0
    res, rx = -1.0, lo
    dmax = [-1.0] * len(depths)
    dx = [lo] * len(depths)
    unres = ovf = 0
    steps = []
    for (bs, bsx, bsn, br, brx, bsteps, bdmax, bdx, bu, bo) in parts:
        if bs > sup:
            sup, sx, sn = bs, int(bsx), int(bsn)
        if br > res:
            res, rx = br, int(brx)
        for j in range(len(depths)):
            if bdmax[j] > dmax[j]:
                dmax[j], dx[j] = float(bdmax[j]), int(bdx[j])
        unres += int(bu)
        ovf += int(bo)
        steps.append(np.asarray(bsteps))
    allsteps = np.concatenate(steps)
    i = int(np.argmax(allsteps))
    return CumulativeSweepReport(
        lo=lo, hi=hi, cap=cap, follow_cycle=follow_cycle,
        sup_abs_cum=max(sup, 0.0), argmax_x=sx, argmax_n=sn,
        max_residual=max(res, 0.0), residual_x=rx,
        depth_sups=[(d, max(v, 0.0), x) for d, v, x in zip(depths, dmax, dx)],
        unresolved=unres, overflow=ovf,
        max_steps=int(allsteps[i]), argmax_steps_x=lo + i, steps=allsteps,
    )


# ---------------------------------------------------------------- rotation estimate

def estimate_alpha_hat(fam: MapFamily, sample: Sequence[int]) -> float:
    """Circular mean of phase(step(x)) - phase(x) over the sample, in [0, 1)."""
    if len(sample) == 0:
        raise EmptyRange("empty sample")
    ang = []
    for x in sample:
        d = frac(phase(fam, core.gen_step(fam, x)) - phase(fam, x))
        ang.append(2.0 * math.pi * d)
    s = math.fsum(math.sin(a) for a in ang)
    c = math.fsum(math.cos(a) for a in ang)
    if math.hypot(s, c) / len(ang) < 1e-9:
        raise DegenerateMean("unit vectors cancel")
    ah = math.atan2(s, c) / (2.0 * math.pi)
    return ah + 1.0 if ah < 0 else (0.0 if ah >= 1.0 else ah)


# ---------------------------------------------------------------- grid scan

OBJECTIVES = ("sup", "mean", "spread")


@dataclass(frozen=True)
class ScanCell:
    """Deviation of the classic map from rotation under frac(log_a(x + b))."""

    a: float
    b: float
    alpha_hat: float
    sup_dev: float
    mean_dev: float
    spread: float = 0.0
    resultant: float = 1.0
    degenerate: bool = False

    def score(self, objective: str) -> float:
        return {"sup": self.sup_dev, "mean": self.mean_dev, "spread": self.spread}[objective]


@dataclass
class ScanResult:
    cells: list[ScanCell]
    best: ScanCell | None
    objective: str
    alpha_mode: str
    a_step: float
    b_step: float

    def to_dict(self) -> dict:
        return {"objective": self.objective, "alpha_mode": self.alpha_mode,
                "a_step": self.a_step, "b_step": self.b_step,
                "best": asdict(self.best) if self.best else None, "cells": len(self.cells)}


def grid_axis(lo, hi, step) -> list[Fraction]:
    """lo, lo + step, ... up to hi inclusive, in exact arithmetic."""
    lo, hi, step = (Fraction(str(v)) for v in (lo, hi, step))
    if step <= 0:
        raise ValueError("grid steps must be positive")
    n = int((hi - lo) / step)
    return [lo + i * step for i in range(n + 1)]


def _scan_row(args):
    a, bs, xs, mode, impl_name = args
    impl = kernels.pure if impl_name == "python" else kernels
    af = float(a)
    if af <= 1.0:
        return [ScanCell(af, float(b), math.nan, math.nan, math.nan, math.nan, 0.0, True) for b in bs]
    logbase = math.log(af)
    fixed = frac(math.log(3.0) / logbase) if mode == "analytic" else -1.0
    row = []
    for b in bs:
        ah, r, sup, mean, dmin, dmax = impl.scan_cell(xs, logbase, float(b), fixed)
        row.append(ScanCell(af, float(b), ah, sup, mean, dmax - dmin, r,
                            mode != "analytic" and r < 1e-9))
    return row


def grid_scan(a_range=(2.0, 10.0), b_range=(0.0, 1.0), a_step=0.1, b_step=0.1,
              sample: SampleSpec | None = None, objective: str = "sup",
              alpha_mode: str = "empirical", *, workers: int | None = None,
              backend: str | None = None) -> ScanResult:
    """Evaluate every grid cell and pick the minimiser of ``objective``.

    Ties go to the smaller a, then the smaller b; degenerate cells never win.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    if alpha_mode not in ("empirical", "analytic"):
        raise ValueError("alpha_mode must be 'empirical' or 'analytic'")
    sample = sample or SampleSpec(100, 10_000)
    xs = sample_array(sample)
    a_axis, b_axis = grid_axis(*a_range, a_step), grid_axis(*b_range, b_step)
    tasks = [(a, b_axis, xs, alpha_mode, backend) for a in a_axis]
    cells = [c for row in _run_blocks(_scan_row, tasks, workers or default_workers()) for c in row]
    best = None
    for c in cells:  # grid order is (a, b) ascending, so strict < keeps the tie rule
        if c.degenerate:
            continue
        if best is None or c.score(objective) < best.score(objective):
            best = c
    return ScanResult(cells, best, objective, alpha_mode, float(a_step), float(b_step))


def coarse_to_fine_scan(a_range=(2.0, 10.0), b_range=(0.0, 1.0), coarse=0.1, fine=0.01,
                        sample: SampleSpec | None = None, objective: str = "sup",
                        alpha_mode: str = "empirical", *, workers: int | None = None):
    """Coarse grid over the whole box, then a fine grid one coarse step around its argmin."""
    first = grid_scan(a_range, b_range, coarse, coarse, sample, objective, alpha_mode,
                      workers=workers)
    if first.best is None:
        return first, first
    ca, cb = Fraction(str(first.best.a)), Fraction(str(first.best.b))
    step = Fraction(str(coarse))
    a_lo = max(Fraction(str(a_range[0])), ca - step)
    a_hi = min(Fraction(str(a_range[1])), ca + step)
    b_lo = max(Fraction(str(b_range[0])), cb - step)
    b_hi = min(Fraction(str(b_range[1])), cb + step)
    second = grid_scan((a_lo, a_hi), (b_lo, b_hi), fine, fine, sample, objective, alpha_mode,
                       workers=workers)
    return first, second
