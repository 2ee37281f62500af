"""Shared oracles and the acceptance summary hook."""
import mpmath
import pytest

mpmath.mp.dps = 50

ACCEPTANCE_LINES: list[str] = []


def mp_phase(x, a=3, b=1):
    """frac(log_{2a}(x + b/(2a-1))) in 50-digit arithmetic."""
    a, b = mpmath.mpf(a), mpmath.mpf(b)
    v = mpmath.log(mpmath.mpf(x) + b / (2 * a - 1)) / mpmath.log(2 * a)
    return v - mpmath.floor(v)


def mp_wrap(u):
    return u - mpmath.ceil(u - mpmath.mpf("0.5"))


def mp_eps(x, a=3, b=1):
    y = x // 2 if x % 2 == 0 else a * x + b
    alpha = mpmath.log(a) / mpmath.log(2 * a)
    return mp_wrap(mp_phase(y, a, b) - mp_phase(x, a, b) - alpha)


def brute_orbit(x):
    out = [x]
    while x != 1:
        x = x // 2 if x % 2 == 0 else 3 * x + 1
        out.append(x)
    return out


@pytest.fixture
def oracle_eps():
    return lambda x: float(mp_eps(x))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
