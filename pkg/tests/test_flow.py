import math

import pytest
from hypothesis import given, strategies as st

from collatz_phase.flow import (FlowVariant, flow, flow_conjugacy_residual, flow_table,
                                flow_vs_map, real_phase)
from collatz_phase.phase import ALPHA, frac

VARIANTS = list(FlowVariant)


def test_flow_examples():
    assert flow(1, 1, "corrected") == pytest.approx(3.4, abs=1e-14)
    assert flow(1, 1, "printed") == pytest.approx(7.0, abs=1e-14)
    for v in VARIANTS:
        assert flow(12.5, 0, v) == pytest.approx(12.5, abs=1e-14)


def test_domain():
    with pytest.raises(ValueError):
        flow(-0.2, 1.0)
    with pytest.raises(ValueError):
        FlowVariant("koopman")


def test_conjugacy_examples():
    assert flow_conjugacy_residual(1, 1, "corrected") < 1e-12
    assert real_phase(3.4) == pytest.approx(0.7149028, abs=1e-7)
    assert real_phase(3.4) == pytest.approx(frac(real_phase(1) + ALPHA), abs=1e-12)
    assert flow_conjugacy_residual(1, 1, "printed") < 1e-12
    assert flow_conjugacy_residual(5, 0, "corrected") == 0.0


def test_conjugacy_grid():
    worst = {v: 0.0 for v in VARIANTS}
    for i in range(100):
        x = 10 ** (6 * i / 99)
        for j in range(100):
            t = -2 + 4 * j / 99
            for v in VARIANTS:
                worst[v] = max(worst[v], flow_conjugacy_residual(x, t, v))
    assert all(w < 1e-10 for w in worst.values())


def test_flow_vs_map_examples():
    assert flow_vs_map(1) == pytest.approx((3.4, -0.6), abs=1e-12)
    assert flow_vs_map(3) == pytest.approx((9.4, -0.6), abs=1e-12)
    assert flow_vs_map(10) == pytest.approx((30.4, 25.4), abs=1e-12)


def test_constant_gap_on_odd_inputs():
    for x in range(1, 2001, 2):
        assert flow_vs_map(x)[1] == pytest.approx(-0.6, abs=1e-9)


@given(st.floats(1, 1e6), st.floats(-2, 2), st.floats(-2, 2), st.sampled_from(VARIANTS))
def test_group_law(x, s, t, v):
    one = flow(x, t + s, v)
    two = flow(flow(x, s, v), t, v)
    assert abs(one - two) < 1e-10 * (1 + abs(one))


def test_published_rows_all_flagged():
    rows = flow_table([1, 2, 3], {1: 4.0, 2: 1.033333, 3: 10.0})
    assert all(r.flagged for r in rows)
    assert not flow_table([1], {1: 3.4})[0].flagged
    assert not flow_table([1])[0].flagged
