"""Collatz dynamics in logarithmic phase coordinates.

The map x -> x/2 | 3x+1 is compared with the circle rotation by
alpha = log_6 3 under the phase frac(log_6(x + 1/5)).
"""
__version__ = "0.1.0"

from .core import Overflow, Unresolved, orbit_stats, step, total_stopping_time, terras_stopping_time
from .phase import ALPHA, CLASSIC, MapFamily, eps, eps_exact_branch, family_params, phase, wrap_signed
from .kernels import BACKEND

__all__ = [
    "__version__", "ALPHA", "BACKEND", "CLASSIC", "MapFamily", "Overflow", "Unresolved",
    "eps", "eps_exact_branch", "family_params", "orbit_stats", "phase", "step",
    "terras_stopping_time", "total_stopping_time", "wrap_signed",
]
