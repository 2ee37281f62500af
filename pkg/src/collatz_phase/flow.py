"""Continuous interpolating flow for the classic map.

Two closed forms are offered. ``corrected`` scales by 3^t and is conjugated
by the real transform frac(log_6(x + 1/5)) to translation at rate alpha;
``printed`` scales by 6^t, which translates at rate 1 instead.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import core
from .phase import ALPHA, LOG6, circle_dist, frac

SHIFT = 0.2


class FlowVariant(str, enum.Enum):
    CORRECTED = "corrected"
    PRINTED = "printed"

    @property
    def factor(self) -> float:
        return 3.0 if self is FlowVariant.CORRECTED else 6.0

    @property
    def rate(self) -> float:
        return ALPHA if self is FlowVariant.CORRECTED else 1.0


def _variant(v) -> FlowVariant:
    return v if isinstance(v, FlowVariant) else FlowVariant(v)


def real_phase(x: float) -> float:
    """frac(log_6(x + 1/5)) for real x > 0."""
    return frac(math.log(x + SHIFT) / LOG6)


def flow(x: float, t: float, variant=FlowVariant.CORRECTED) -> float:
    # the closed form stays valid on x > -1/5, which intermediate flow values can reach
    if x <= -SHIFT:
        raise ValueError("flow is defined for x > -1/5")
    v = _variant(variant)
    return v.factor ** t * (x + SHIFT) - SHIFT


def flow_conjugacy_residual(x: float, t: float, variant=FlowVariant.CORRECTED) -> float:
    """Circle distance between T(flow(x, t)) and T(x) + t * rate."""
    v = _variant(variant)
    return circle_dist(real_phase(flow(x, t, v)), frac(real_phase(x) + t * v.rate))


def flow_vs_map(x: int, variant=FlowVariant.CORRECTED) -> tuple[float, float]:
    """(flow(x, 1), flow(x, 1) - C(x))."""
    f = flow(x, 1.0, variant)
    return f, f - core.step(x)


@dataclass(frozen=True)
class FlowRow:
    x: int
    cx: int
    corrected: float
    printed: float
    published: float | None = None

    @property
    def flagged(self) -> bool:
        # a published value is reproduced if either variant rounds to it
        if self.published is None:
            return False
        tol = 0.5e-6
        return abs(self.corrected - self.published) > tol and abs(self.printed - self.published) > tol


def flow_table(xs, published: dict[int, float] | None = None) -> list[FlowRow]:
    published = published or {}
    return [FlowRow(x, core.step(x), flow(x, 1.0, "corrected"), flow(x, 1.0, "printed"),
                    published.get(x)) for x in xs]
