"""Phase coordinates on the unit circle and the one-step deviation eps.

The classic transform is frac(log_6(x + 1/5)). For an integer family (a, b)
the base is 2a and the shift b/(2a - 1); the phase is evaluated as
``(ln((2a-1)x + b) - ln(2a-1)) / ln(2a)`` so the logarithm sees an exact
integer argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

from . import core

# definitional eps loses its significant digits once eps ~ 1e-13
BRANCH_THRESHOLD = 10**12


class InvalidFamily(ValueError):
    pass


def _exact(v) -> Fraction | float:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        # 1.5 -> 3/2, 0.2 -> 1/5: read the value the way it prints
        return Fraction(repr(v))
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, Real):
        return Fraction(float(v)).limit_denominator(10**12)
    raise TypeError(f"unsupported parameter type {type(v).__name__}")


@dataclass(frozen=True)
class MapFamily:
    """Generalised map x/2 | a*x + b with its transform constants."""

    a: Fraction
    b: Fraction
    base: Fraction = field(init=False)
    shift: Fraction = field(init=False)
    alpha: float = field(init=False)

    def __post_init__(self):
        a, b = _exact(self.a), _exact(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if 2 * a - 1 <= 0:
            raise InvalidFamily(f"2a - 1 must be positive, got a={a}")
        if b <= 0:
            raise InvalidFamily(f"b must be positive, got {b}")
        object.__setattr__(self, "base", 2 * a)
        object.__setattr__(self, "shift", b / (2 * a - 1))
        object.__setattr__(self, "alpha", math.log(a) / math.log(2 * a))

    @property
    def is_integer(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    @property
    def is_classic(self) -> bool:
        return self.a == 3 and self.b == 1

    def kernel_params(self) -> dict:
        """Integer constants the compiled loops expect."""
        if not self.is_integer:
            raise core.NonIntegerFamily(f"family ({self.a}, {self.b}) is not integral")
        a, b = int(self.a), int(self.b)
        k = 2 * a - 1
        return dict(
            mult=a,
            add=b,
            k=k,
            logk=math.log(k),
            logbase=math.log(2 * a),
            alpha=self.alpha,
            branch_from=BRANCH_THRESHOLD if self.is_classic else 0,
        )

    def label(self) -> str:
        return f"({_fmt(self.a)},{_fmt(self.b)})"


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else str(float(q))


def family_params(a, b) -> MapFamily:
    return MapFamily(a, b)


CLASSIC = MapFamily(3, 1)
LOG6 = math.log(6.0)
LOG5 = math.log(5.0)
ALPHA = CLASSIC.alpha


def rotation_number(fam: MapFamily) -> float:
    return math.log(fam.a) / math.log(fam.base)


def frac(v: float) -> float:
    return v - math.floor(v)


def phase(fam: MapFamily, x) -> float:
    """Point on [0, 1) assigned to x by the family's transform."""
    if fam.is_integer and isinstance(x, int):
        if x < 1:
            raise ValueError("phase is defined for x >= 1")
        p = fam.kernel_params()
        k, add = p["k"], p["add"]
        if x <= (core.U128_MAX - add) // k:
            v = (math.log(float(k * x + add)) - p["logk"]) / p["logbase"]
        else:
            v = (math.log(float(x)) + math.log1p(float(add) / (float(k) * float(x)))) / p["logbase"]
        return v - math.floor(v)
    v = math.log(float(x) + float(fam.shift)) / math.log(fam.base)
    return v - math.floor(v)


def wrap_signed(u: float) -> float:
    """Reduce u modulo 1 into (-0.5, 0.5]; the half point goes to +0.5."""
    if not math.isfinite(u):
        raise ValueError("wrap_signed needs a finite value")
    return u - math.ceil(u - 0.5)


def circle_dist(p: float, q: float) -> float:
    d = abs(p - q) % 1.0
    return min(d, 1.0 - d)


def eps(fam: MapFamily, x: int) -> float:
    """Signed deviation of one map step from rotation by the family's alpha."""
    if fam.is_classic and x > BRANCH_THRESHOLD:
        return eps_exact_branch(x)
    y = core.gen_step(fam, x)
    return wrap_signed(phase(fam, y) - phase(fam, x) - fam.alpha)


def eps_exact_branch(x: int) -> float:
    """Closed-form eps for the classic map, one formula per parity.

    even x = 2y:   log6(1 + 1/(5y)) - log6(1 + 1/(10y)) = log6(1 + 1/(10y + 1))
    odd x = 2y+1:  log6(1 + 0.7/y) - log6(1 + 0.6/y)   = log6(1 + 1/(10y + 6))
    x = 1:         log6(3.5) - alpha
    Both right-hand sides are evaluated with log1p on an exact reciprocal.
    """
    if x < 1:
        raise ValueError("x must be positive")
    if x == 1:
        return math.log(3.5) / LOG6 - ALPHA
    y = x >> 1
    if x & 1 == 0:
        return math.log1p(1 / (10 * y + 1)) / LOG6
    return math.log1p(1 / (10 * y + 6)) / LOG6


# series coefficients in units of 1/ln 6, per power of 1/y
_EVEN_SERIES = (Fraction(1, 10), Fraction(-3, 200), Fraction(7, 3000))
# (0.7^k - 0.6^k)/k with alternating sign; printed to 3 significant digits
# elsewhere as 0.1, 0.065, 0.0423
_ODD_SERIES = (
    Fraction(7, 10) - Fraction(6, 10),
    -(Fraction(49, 100) - Fraction(36, 100)) / 2,
    (Fraction(343, 1000) - Fraction(216, 1000)) / 3,
)


def eps_series(parity: str, y: int, order: int = 3) -> float:
    """Truncated 1/y expansion of eps for x = 2y (even) or x = 2y+1 (odd)."""
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if not 1 <= order <= 3:
        raise ValueError("order must be 1, 2 or 3")
    if y < 1:
        raise ValueError("y must be >= 1")
    coeffs = _EVEN_SERIES if parity == "even" else _ODD_SERIES
    return sum(float(c) / y ** (i + 1) for i, c in enumerate(coeffs[:order])) / LOG6


def series_coefficients(parity: str) -> tuple[float, float, float]:
    """c1, c2, c3 with eps ~ c1/y + c2/y^2 + c3/y^3."""
    coeffs = _EVEN_SERIES if parity == "even" else _ODD_SERIES
    return tuple(float(c) / LOG6 for c in coeffs)
