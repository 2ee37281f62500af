import csv
import math

import pytest
from hypothesis import given, strategies as st

from collatz_phase import cumulative as cu
from collatz_phase.phase import ALPHA, CLASSIC, eps


def test_cycle_record_for_one():
    rec = cu.track(1, 3, follow_cycle=True)
    assert rec.values == [1, 4, 2, 1]
    assert rec.cum_errors == pytest.approx([0, 0.086033, 0.111996, 0.160558], abs=1e-6)
    assert cu.max_abs_cum(rec) == (pytest.approx(0.160558, abs=1e-6), 3)


def test_one_without_cycle_following_stops_immediately():
    rec = cu.track(1, 3)
    assert rec.values == [1] and rec.resolved and rec.n_steps == 0
    assert cu.max_abs_cum(rec) == (0.0, 0)


def test_first_steps():
    assert cu.track(27, 1).cum_errors[1] == pytest.approx(0.004088, abs=1e-6)
    assert cu.track(2, 1).cum_errors[1] == pytest.approx(0.048562, abs=1e-6)


def test_tail_sums():
    assert cu.max_abs_cum(cu.track(4)) == (pytest.approx(0.074525, abs=1e-6), 2)
    assert cu.max_abs_cum(cu.track(16)) == (pytest.approx(0.094822, abs=1e-6), 4)


def test_record_lengths_and_recurrence():
    rec = cu.track(27)
    assert len(rec.values) == len(rec.cum_errors) == len(rec.phases) == len(rec.parities) == 112
    assert len(rec.eps_seq) == 111 and rec.cum_errors[0] == 0.0
    for n in range(1, 112):
        assert rec.cum_errors[n] == pytest.approx(rec.cum_errors[n - 1] + rec.eps_seq[n - 1], abs=1e-15)


@pytest.mark.parametrize("x,n", [(27, 111), (97, 118)])
def test_telescoping_full_orbit(x, n):
    rec = cu.track(x)
    assert rec.n_steps == n and rec.resolved
    assert cu.telescope_residual(rec, 0) == 0.0
    assert cu.telescope_residual(rec, n) < 1e-9
    assert rec.max_residual < 1e-9


def test_telescoping_every_step_small_range():
    worst = 0.0
    for x in range(1, 2001):
        rec = cu.track(x)
        worst = max(worst, max(cu.telescope_residual(rec, n) for n in range(len(rec))))
    assert worst < 1e-9


def test_monotone_cumulative_error():
    assert all(cu.track(x).monotone for x in range(2, 3000))


def test_cycle_sum_identity():
    rec = cu.track(1, 3, follow_cycle=True)
    assert abs(rec.final_cum - (2 - 3 * ALPHA)) < 1e-12


def test_resume_matches_single_run():
    whole = cu.track(97)
    first = cu.track(97, 40)
    rest = cu.continue_track(first, 10**5)
    joined = first.cum_errors + rest.cum_errors[1:]
    assert len(joined) == len(whole.cum_errors)
    assert max(abs(a - b) for a, b in zip(joined, whole.cum_errors)) < 1e-12


def test_store_limit_keeps_aggregates():
    full = cu.track(27)
    short = cu.track(27, store_limit=10)
    assert short.truncated and len(short.values) == 10
    assert short.final_cum == full.final_cum and short.n_steps == 111
    assert short.max_abs == full.max_abs


def test_overflow_marks_record():
    rec = cu.track((1 << 127) + 1, 10)
    assert rec.overflow and not rec.resolved and rec.n_steps == 0


def test_telescope_index_checked():
    with pytest.raises(IndexError):
        cu.telescope_residual(cu.track(4), 10)


def test_csv_export(tmp_path):
    path = cu.export_csv(cu.track(27), tmp_path / "t.csv")
    rows = list(csv.reader(path.open()))
    assert rows[0] == list(cu.CSV_COLUMNS)
    assert rows[1][:3] == ["0", "27", "odd"]
    assert float(rows[2][4]) == pytest.approx(eps(CLASSIC, 27), rel=1e-6)
    assert len(rows) == 113


@given(st.lists(st.floats(-0.5, 0.5), min_size=1, max_size=400))
def test_compensated_sum_accuracy(xs):
    s = cu.CompensatedSum()
    for v in xs:
        s.add(v)
    exact = math.fsum(xs)
    assert abs(s.value - exact) <= 2 * len(xs) * math.ulp(max(1.0, abs(exact)))


def test_compensated_merge():
    a, b = cu.CompensatedSum(), cu.CompensatedSum()
    vals = [0.1] * 1000 + [1e-17] * 1000
    for v in vals[:1000]:
        a.add(v)
    for v in vals[1000:]:
        b.add(v)
    a.merge(b)
    assert a.value == pytest.approx(math.fsum(vals), abs=1e-15)
