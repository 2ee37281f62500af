"""Statistics built on top of eps: zones, cycles, stopping times, spectra."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import core, kernels
from .phase import ALPHA, CLASSIC, circle_dist, eps, frac, phase
from .survey import SampleSpec, sample_array

DEFAULT_TAIL_B = 0.281
CYCLE_BOUND = 0.275
WORD_LENGTH = 20
_CHUNK = 1 << 15


class EmptyInput(ValueError):
    pass


class NotACycle(ValueError):
    pass


def quantiles(values: Sequence[float], qs: Sequence[float]) -> list[float]:
    """Nearest-rank quantiles: the ceil(q*n)-th smallest value (rank >= 1)."""
    vals = sorted(values)
    if not vals:
        raise EmptyInput("no values")
    n = len(vals)
    out = []
    for q in qs:
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"quantile level {q} outside [0, 1]")
        out.append(vals[max(1, math.ceil(q * n)) - 1])
    return out


def _mean(values: Iterable[float], n: int) -> float:
    # one accumulation path for every sample mean in this module
    return math.fsum(values) / n


# ---------------------------------------------------------------- zones

def zone_membership(x: int, delta: float) -> bool:
    """True when T(x) lies strictly within delta of T(1) on the circle."""
    if x < 1:
        raise ValueError("x must be >= 1")
    if not 0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 0.5]")
    return circle_dist(phase(CLASSIC, x), phase(CLASSIC, 1)) < delta


@dataclass
class ZoneReport:
    delta: float
    center: float
    members_tested: int
    members: int
    member_fraction: float
    weighted_fraction: float  # each x weighted by 1/x
    max_steps_to_1: int
    argmax_member: int
    mean_steps_to_1: float
    unresolved: int
    claimed_max: int | None = None
    counterexample: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _zone_data(lo: int, hi: int, cap: int):
    p = CLASSIC.kernel_params()
    impl = kernels.for_range(hi)
    ph = impl.phase_block(lo, hi, p["k"], p["add"], p["logk"], p["logbase"])
    total, _ = impl.stop_times(lo, hi, cap)
    d = np.abs(ph - phase(CLASSIC, 1)) % 1.0
    d = np.minimum(d, 1.0 - d)
    return d, np.asarray(total)


def termination_zone_report(deltas: Sequence[float], lo: int = 1, hi: int = 10**6,
                            cap: int = core.SWEEP_CAP,
                            claimed: dict[float, int] | None = None) -> list[ZoneReport]:
    """Membership fraction and steps-to-1 of members, one report per delta.

    ``claimed`` maps delta to a published maximum step count; the first member
    exceeding it is recorded as a counterexample.
    """
    if lo < 1 or lo > hi:
        raise ValueError("need 1 <= lo <= hi")
    dist, steps = _zone_data(lo, hi, cap)
    xs = np.arange(lo, hi + 1, dtype=np.float64)
    w = 1.0 / xs
    wsum = math.fsum(w)
    center = phase(CLASSIC, 1)
    out = []
    for delta in deltas:
        if not 0 < delta <= 0.5:
            raise ValueError("delta must lie in (0, 0.5]")
        mask = dist < delta
        m = int(mask.sum())
        st = steps[mask]
        ok = st >= 0
        res = st[ok]
        if len(res):
            i = int(np.argmax(res))
            mx, arg = int(res[i]), lo + int(np.flatnonzero(mask)[np.flatnonzero(ok)[i]])
            mean = _mean(res.tolist(), len(res))
        else:
            mx, arg, mean = 0, 0, math.nan
        rep = ZoneReport(delta, center, hi - lo + 1, m, m / (hi - lo + 1),
                         math.fsum(w[mask]) / wsum, mx, arg, mean, int((~ok).sum()))
        if claimed and delta in claimed:
            rep.claimed_max = claimed[delta]
            over = np.flatnonzero(mask & (steps > claimed[delta]))
            rep.counterexample = lo + int(over[0]) if len(over) else None
        out.append(rep)
    return out


def basin(delta: float, lo: int = 1, hi: int = 10**6, cap: int = core.SWEEP_CAP) -> int:
    """B(delta): the largest steps-to-1 over integers whose phase lies in Z_delta."""
    return termination_zone_report([delta], lo, hi, cap)[0].max_steps_to_1


# ---------------------------------------------------------------- cycles

@dataclass(frozen=True)
class CycleRow:
    p: int
    p_alpha: float
    m: int
    residue: float
    bound: float
    feasible: bool


def cycle_feasibility(p_max: int, bound_coeff: float = CYCLE_BOUND) -> list[CycleRow]:
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    rows = []
    for p in range(1, p_max + 1):
        pa = p * ALPHA
        m = round(pa)
        res = abs(pa - m)
        rows.append(CycleRow(p, pa, m, res, bound_coeff * p, res <= bound_coeff * p))
    return rows


def cycle_eps_sum(cycle: Sequence[int]) -> tuple[float, float]:
    """(sum of eps over the cycle, circle distance of sum + p*alpha from 0)."""
    if not cycle:
        raise NotACycle("empty sequence")
    for i, x in enumerate(cycle):
        nxt = cycle[(i + 1) % len(cycle)]
        if core.step(x) != nxt:
            raise NotACycle(f"C({x}) = {core.step(x)}, not {nxt}")
    s = math.fsum(eps(CLASSIC, x) for x in cycle)
    return s, circle_dist(frac(s + len(cycle) * ALPHA), 0.0)


# ---------------------------------------------------------------- stopping times

@dataclass
class StoppingHistogram:
    mode: str
    lo: int
    hi: int
    counts: dict[int, int]
    unresolved: int
    overflow: int
    tail_b: float

    @property
    def resolved(self) -> int:
        return sum(self.counts.values())

    def survival(self, k_max: int | None = None) -> list[tuple[int, float]]:
        """P(sigma > k) for k = 0..k_max over resolved entries."""
        n = self.resolved
        if n == 0:
            raise EmptyInput("no resolved stopping times")
        k_max = max(self.counts) if k_max is None else k_max
        out, above = [], n
        for k in range(k_max + 1):
            above -= self.counts.get(k, 0)
            out.append((k, above / n))
        return out

    def model(self, k: int) -> float:
        """Tail model 2B/(k*alpha)."""
        return 2.0 * self.tail_b / (k * ALPHA) if k > 0 else math.inf

    def table(self, k_max: int | None = None) -> list[tuple[int, float, float]]:
        return [(k, s, self.model(k)) for k, s in self.survival(k_max)]


def stopping_histogram(lo: int, hi: int, mode: str = "total", cap: int = core.SWEEP_CAP,
                       tail_b: float = DEFAULT_TAIL_B) -> StoppingHistogram:
    if mode not in ("total", "terras"):
        raise ValueError("mode must be 'total' or 'terras'")
    if lo < 1 or lo > hi:
        raise ValueError("need 1 <= lo <= hi")
    total, terr = kernels.for_range(hi).stop_times(lo, hi, cap)
    arr = np.asarray(total if mode == "total" else terr)
    counts = Counter(int(v) for v in arr[arr >= 0])
    return StoppingHistogram(mode, lo, hi, dict(sorted(counts.items())),
                             int((arr == -1).sum()), int((arr == -2).sum()), tail_b)


# ---------------------------------------------------------------- spectra

def _eps_rows(xs: np.ndarray, steps: int) -> tuple[np.ndarray, np.ndarray, int]:
    """eps along the first ``steps`` iterates and parity words, overflowing rows dropped."""
    p = CLASSIC.kernel_params()
    impl = kernels.for_range(int(xs.max()) if len(xs) else 0)
    es, ws, dropped = [], [], 0
    for s in range(0, len(xs), _CHUNK):
        e, words, bad = impl.orbit_eps_matrix(xs[s:s + _CHUNK], steps, p["k"], p["add"],
                                              p["logk"], p["logbase"], p["alpha"],
                                              p["branch_from"])
        keep = bad == 0
        dropped += int((~keep).sum())
        es.append(e[keep])
        ws.append(words[keep])
    if not es:
        return np.zeros((0, steps)), np.zeros(0, dtype=np.uint64), 0
    return np.concatenate(es), np.concatenate(ws), dropped


def _parity(words: np.ndarray) -> np.ndarray:
    """Parity of the popcount of each 64-bit word."""
    w = words.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        w ^= w >> np.uint64(shift)
    return (w & np.uint64(1)).astype(bool)


def autocorrelation(sample: SampleSpec, k_max: int = 10) -> list[tuple[int, float]]:
    """R(k) = mean of eps(x) * eps(C^k(x)) over the sample, for k = 0..k_max."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    e, _, _ = _eps_rows(sample_array(sample), k_max + 1)
    if len(e) == 0:
        raise EmptyInput("no usable sample points")
    return [(k, _mean(e[:, 0] * e[:, k], len(e))) for k in range(k_max + 1)]


def default_walsh_sets(max_size: int = 3, universe: int = 6) -> list[tuple[int, ...]]:
    sets: list[tuple[int, ...]] = []
    for r in range(max_size + 1):
        sets.extend(itertools.combinations(range(1, universe + 1), r))
    return sets


def walsh_coefficients(sample: SampleSpec, m: int = WORD_LENGTH,
                       sets: Sequence[Sequence[int]] | None = None) -> list[tuple[tuple[int, ...], float]]:
    """a_I = mean of eps(x) * chi_I(omega(x)).

    omega_i is the parity of C^(i-1)(x), 1 for odd, so index 1 is x itself,
    and chi_I = prod_{i in I} (-1)^omega_i.
    """
    if not 1 <= m <= 64:
        raise ValueError("word length must be in 1..64")
    sets = [tuple(s) for s in (default_walsh_sets() if sets is None else sets)]
    for s in sets:
        if any(not 1 <= i <= m for i in s):
            raise ValueError(f"set {s} not inside 1..{m}")
    e, words, _ = _eps_rows(sample_array(sample), m)
    if len(e) == 0:
        raise EmptyInput("no usable sample points")
    e0 = e[:, 0]
    out = []
    for s in sets:
        mask = np.uint64(sum(1 << (i - 1) for i in set(s)))
        odd = _parity(words & mask)
        out.append((s, _mean(np.where(odd, -e0, e0), len(e0))))
    return out


def mean_eps(sample: SampleSpec) -> float:
    e, _, _ = _eps_rows(sample_array(sample), 1)
    if len(e) == 0:
        raise EmptyInput("no usable sample points")
    return _mean(e[:, 0], len(e))


@dataclass
class SpectralEstimates:
    autocorr: list[tuple[int, float]]
    walsh: list[tuple[tuple[int, ...], float]]
    sample_spec: SampleSpec
    word_length: int = WORD_LENGTH
    extra: dict = field(default_factory=dict)


def spectral_estimates(sample: SampleSpec, k_max: int = 10, m: int = WORD_LENGTH,
                       sets=None) -> SpectralEstimates:
    return SpectralEstimates(autocorrelation(sample, k_max), walsh_coefficients(sample, m, sets),
                             sample, m)


# ---------------------------------------------------------------- growth

def growth_table(xs: Sequence[int], cap: int = core.DEFAULT_CAP) -> list[core.OrbitStats]:
    if not xs:
        raise EmptyInput("no starting values")
    return [core.orbit_stats(int(x), cap) for x in xs]
