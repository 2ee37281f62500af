import pytest
from hypothesis import given, strategies as st

from collatz_phase import core
from collatz_phase.phase import MapFamily
from conftest import brute_orbit


def test_step_basic():
    assert core.step(1) == 4
    assert core.step(4) == 2
    assert core.step(27) == 82


def test_step_rejects_nonpositive():
    with pytest.raises(ValueError):
        core.step(0)


def test_step_overflow_boundary():
    top = (core.U128_MAX - 1) // 3
    top -= (top + 1) % 2  # largest odd value that still fits
    assert core.step(top) == 3 * top + 1 <= core.U128_MAX
    with pytest.raises(core.Overflow):
        core.step(top + 2)
    assert core.step(core.U128_MAX - 1) == (core.U128_MAX - 1) // 2


def test_known_stopping_times():
    assert core.total_stopping_time(27) == 111
    assert core.total_stopping_time(97) == 118
    assert core.terras_stopping_time(27) == 96
    assert core.terras_stopping_time(3) == 6
    assert core.terras_stopping_time(97) == 3
    assert core.terras_stopping_time(703) == 132
    assert core.terras_stopping_time(1) == 0
    assert core.total_stopping_time(1) == 0


def test_cap_gives_unresolved():
    r = core.total_stopping_time(27, cap=10)
    assert isinstance(r, core.Unresolved) and not r and r.cap == 10
    assert not core.terras_stopping_time(27, cap=5)


def test_overflowing_orbit_is_unresolved():
    x = (1 << 127) + 1  # odd and above the 3x+1 limit
    r = core.total_stopping_time(x)
    assert isinstance(r, core.Unresolved) and r.overflow
    s = core.orbit_stats(x)
    assert s.overflow and s.peak == x


@given(st.integers(1, 5000))
def test_trajectory_matches_brute_force(x):
    orbit = core.trajectory(x)
    assert orbit == brute_orbit(x)
    assert core.total_stopping_time(x) == len(orbit) - 1


@given(st.integers(2, 5000))
def test_terras_definition(x):
    n = core.terras_stopping_time(x)
    orbit = brute_orbit(x)
    assert orbit[n] < x and all(v >= x for v in orbit[1:n])


def test_orbit_stats_27():
    s = core.orbit_stats(27)
    assert (s.peak, s.total_steps, s.terras_steps) == (9232, 111, 96)
    assert s.peak_ratio == pytest.approx(341.93, abs=5e-3)
    assert s.max_odd_run == 6


def test_orbit_stats_larger_starts():
    assert core.orbit_stats(703).peak == 250504
    assert core.orbit_stats(9663).peak == 27114424
    assert core.orbit_stats(459759).peak == 6973568800


def test_odd_run_counts_shortcut_steps():
    # 7 -> 11 -> 17 -> 13 (26 even): three odd values in a row on the shortcut orbit
    assert core._odd_run(core.trajectory(7)[:9]) >= 3
    assert core._odd_run([1]) == 0


def test_gen_step_family():
    fam = MapFamily(5, 1)
    assert core.gen_step(fam, 3) == 16
    assert core.gen_step(fam, 8) == 4
    with pytest.raises(core.NonIntegerFamily):
        core.gen_step(MapFamily("1.5", 1), 3)
