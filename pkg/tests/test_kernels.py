"""The compiled kernels and their pure-Python twins must agree."""
import numpy as np
import pytest

from collatz_phase import kernels
from collatz_phase.phase import CLASSIC, MapFamily, eps, phase

compiled = kernels.compiled
pure = kernels.pure
needs_ext = pytest.mark.skipif(compiled is None, reason="extension not built")
P = CLASSIC.kernel_params()


def _eps_args(p):
    return (p["mult"], p["add"], p["k"], p["logk"], p["logbase"], p["alpha"], p["branch_from"])


def _same(a, b):
    assert len(a) == len(b)
    for u, v in zip(a, b):
        if isinstance(u, np.ndarray):
            assert np.array_equal(u, v)
        else:
            assert u == v


@needs_ext
@pytest.mark.parametrize("lo,hi", [(1, 5000), (2**40, 2**40 + 500), (10**12 - 100, 10**12 + 100)])
def test_eps_block_parity(lo, hi):
    args = (lo, hi) + _eps_args(P) + (500, 1e-3)
    _same(compiled.eps_block(*args), pure.eps_block(*args))


@needs_ext
def test_eps_block_other_family():
    p = MapFamily(5, 1).kernel_params()
    args = (1, 3000) + _eps_args(p) + (500, 1e-3)
    _same(compiled.eps_block(*args), pure.eps_block(*args))


@needs_ext
@pytest.mark.parametrize("follow", [False, True])
def test_orbit_block_parity(follow):
    depths = np.array([0, 10, 50, 100], dtype=np.int64)
    args = (1, 1500, 20000) + _eps_args(P) + (follow, depths)
    _same(compiled.orbit_block(*args), pure.orbit_block(*args))


@needs_ext
def test_orbit_block_overflow_parity():
    lo = (1 << 62) + 1
    depths = np.array([10], dtype=np.int64)
    args = (lo, lo + 20, 5000) + _eps_args(P) + (False, depths)
    _same(compiled.orbit_block(*args), pure.orbit_block(*args))


@needs_ext
def test_stop_times_parity():
    _same(compiled.stop_times(1, 20000, 20000), pure.stop_times(1, 20000, 20000))
    _same(compiled.stop_times(500, 700, 50), pure.stop_times(500, 700, 50))


@needs_ext
def test_orbit_eps_matrix_parity():
    xs = np.array([1, 2, 3, 27, 97, 2**62 + 1], dtype=np.uint64)
    args = (xs, 30, P["k"], P["add"], P["logk"], P["logbase"], P["alpha"], P["branch_from"])
    _same(compiled.orbit_eps_matrix(*args), pure.orbit_eps_matrix(*args))


@needs_ext
def test_phase_block_parity():
    a = compiled.phase_block(1, 3000, P["k"], P["add"], P["logk"], P["logbase"])
    b = pure.phase_block(1, 3000, P["k"], P["add"], P["logk"], P["logbase"])
    assert np.array_equal(a, b)


@needs_ext
def test_scan_cell_agrees_to_rounding():
    xs = np.arange(100, 10001, dtype=np.uint64)
    for fixed in (-1.0, 0.6131):
        a = compiled.scan_cell(xs, np.log(6.0), 0.2, fixed)
        b = pure.scan_cell(xs, np.log(6.0), 0.2, fixed)
        assert np.allclose(a, b, rtol=0, atol=1e-12)


def test_pure_kernel_matches_scalar_eps():
    c, mx, amx, *_ = pure.eps_block(1, 200, *_eps_args(P), 500, 1e-3)
    assert c == 200 and amx == 1 and mx == eps(CLASSIC, 1)
    ph = pure.phase_block(1, 5, P["k"], P["add"], P["logk"], P["logbase"])
    assert list(ph) == [phase(CLASSIC, x) for x in range(1, 6)]


def test_pure_stop_times_memo_matches_direct():
    total, terr = pure.stop_times(1, 3000, 20000)
    from collatz_phase import core
    for x in (1, 2, 27, 97, 703, 2999):
        assert total[x - 1] == core.total_stopping_time(x)
        assert terr[x - 1] == core.terras_stopping_time(x)


def test_backend_name():
    assert kernels.BACKEND in ("compiled", "python")
    assert kernels.for_range(2**70) is pure
