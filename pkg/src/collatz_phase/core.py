"""Exact integer dynamics of the Collatz map and its (a, b) relatives.

Orbit values are Python ints held to the unsigned 128-bit range: a step that
would leave it raises :class:`Overflow`. Functions that walk an orbit never
raise for that reason; they return an :class:`Unresolved` marker instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

U128_MAX = (1 << 128) - 1

DEFAULT_CAP = 100_000
SWEEP_CAP = 20_000


class Overflow(ArithmeticError):
    """An orbit value left the unsigned 128-bit range."""


class NonIntegerFamily(ValueError):
    """Orbit iteration was requested for a family with non-integer a or b."""


@dataclass(frozen=True)
class Unresolved:
    """Iteration stopped before the target was reached."""

    cap: int
    overflow: bool = False

    def __bool__(self) -> bool:
        return False


Count = Union[int, Unresolved]


def _check(x: int) -> None:
    if x < 1:
        raise ValueError(f"orbit values must be positive, got {x}")


def step(x: int) -> int:
    """One application of the Collatz map."""
    _check(x)
    if x & 1 == 0:
        return x >> 1
    if x > (U128_MAX - 1) // 3:
        raise Overflow(x)
    return 3 * x + 1


def gen_step(fam, x: int) -> int:
    """x/2 for even x, a*x + b for odd x, under the family ``fam``."""
    _check(x)
    a, b = _int_params(fam)
    if x & 1 == 0:
        return x >> 1
    if x > (U128_MAX - b) // a:
        raise Overflow(x)
    return a * x + b


def _int_params(fam) -> tuple[int, int]:
    a, b = Fraction(fam.a), Fraction(fam.b)
    if a.denominator != 1 or b.denominator != 1:
        raise NonIntegerFamily(f"family ({fam.a}, {fam.b}) cannot be iterated on integers")
    return int(a), int(b)


def trajectory(x: int, cap: int = DEFAULT_CAP) -> list[int]:
    """[x, C(x), C^2(x), ...] up to the first 1 or ``cap`` steps.

    An overflowing step truncates the list; use :func:`orbit_stats` to see
    whether that happened.
    """
    _check(x)
    out = [x]
    while x != 1 and len(out) <= cap:
        try:
            x = step(x)
        except Overflow:
            break
        out.append(x)
    return out


def total_stopping_time(x: int, cap: int = DEFAULT_CAP) -> Count:
    """Least n <= cap with C^n(x) = 1."""
    _check(x)
    n = 0
    while x != 1:
        if n >= cap:
            return Unresolved(cap)
        try:
            x = step(x)
        except Overflow:
            return Unresolved(cap, overflow=True)
        n += 1
    return n


def terras_stopping_time(x: int, cap: int = DEFAULT_CAP) -> Count:
    """Least n <= cap with C^n(x) < x; 0 for x = 1 by convention."""
    _check(x)
    if x == 1:
        return 0
    y, n = x, 0
    while True:
        if n >= cap:
            return Unresolved(cap)
        try:
            y = step(y)
        except Overflow:
            return Unresolved(cap, overflow=True)
        n += 1
        if y < x:
            return n


def _odd_run(orbit: list[int]) -> int:
    # the shortcut orbit drops each 3x+1 value that follows an odd x
    best = cur = 0
    prev_odd = False
    for v in orbit:
        if prev_odd:
            prev_odd = False
            continue
        if v & 1 and v != 1:
            cur += 1
            best = max(best, cur)
            prev_odd = True
        else:
            cur = 0
    return best


@dataclass(frozen=True)
class OrbitStats:
    start: int
    total_steps: Count
    terras_steps: Count
    peak: int
    peak_ratio: float
    max_odd_run: int
    overflow: bool = False


def orbit_stats(x: int, cap: int = DEFAULT_CAP) -> OrbitStats:
    """Peak, peak ratio, stopping times and the longest odd run of one orbit.

    ``max_odd_run`` counts consecutive odd values along the shortcut orbit
    (odd x -> (3x+1)/2), since two consecutive iterates of the plain map are
    never both odd.
    """
    orbit = trajectory(x, cap)
    reached = orbit[-1] == 1
    overflow = not reached and len(orbit) <= cap
    total: Count = len(orbit) - 1 if reached else Unresolved(cap, overflow)
    peak = max(orbit)
    return OrbitStats(
        start=x,
        total_steps=total,
        terras_steps=terras_stopping_time(x, cap),
        peak=peak,
        peak_ratio=peak / x,
        max_odd_run=_odd_run(orbit),
        overflow=overflow,
    )
