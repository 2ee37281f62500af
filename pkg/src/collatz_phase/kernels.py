"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise, or when
``COLLATZ_PHASE_PURE`` is set to a non-empty value other than ``0``, the
pure-Python twins are used. ``BACKEND`` names the active one.
"""
from __future__ import annotations

import os

from . import _pykernels as pure

compiled = None
if os.environ.get("COLLATZ_PHASE_PURE", "0") in ("", "0"):
    try:
        from . import _kernels as compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "compiled" if compiled is not None else "python"

eps_block = _impl.eps_block
orbit_block = _impl.orbit_block
stop_times = _impl.stop_times
phase_block = _impl.phase_block
orbit_eps_matrix = _impl.orbit_eps_matrix
scan_cell = _impl.scan_cell

# kernels take unsigned 64-bit ranges; wider inputs go through the Python twins
KERNEL_LIMIT = (1 << 63) - 1


def for_range(hi: int):
    """Kernel module able to handle values up to ``hi``."""
    return _impl if hi <= KERNEL_LIMIT else pure
