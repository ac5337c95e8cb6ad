"""Kernel backend selection.

The compiled extension is preferred; the pure-NumPy fallback is used when it
is missing or when ``HHGCAT_PURE_PYTHON`` is set in the environment.  Both
expose the same functions with identical numerics.
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("HHGCAT_PURE_PYTHON"):
    _active = _pure
else:
    try:
        from . import _core as _active  # type: ignore[no-redef]
    except ImportError:
        _active = _pure

BACKEND = _active.BACKEND
displaced_parity_grid = _active.displaced_parity_grid
sfa_dipole = _active.sfa_dipole


def available_backends():
    """Map backend name -> kernel module, for benchmarks and cross-checks."""
    backends = {"pure": _pure}
    try:
        from . import _core

        backends["compiled"] = _core
    except ImportError:
        pass
    return backends
