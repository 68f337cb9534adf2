"""Hot numeric kernels with a compiled/pure backend switch.

The compiled backend (_fast, built from _fast.pyx at install time) is used
when it imported cleanly; set EQDRIFT_PURE=1 to force the NumPy backend,
e.g. for benchmarking or when debugging the kernels themselves.
"""

import os

from . import _pure

if os.environ.get("EQDRIFT_PURE"):
    _impl = _pure
else:
    try:
        from . import _fast as _impl
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
solve_depth = _impl.solve_depth
solve_fixed_x = _impl.solve_fixed_x
invert = _impl.invert
advect = _impl.advect

__all__ = ["BACKEND", "solve_depth", "solve_fixed_x", "invert", "advect"]
