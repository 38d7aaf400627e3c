"""Kernel selection: the compiled module when it was built, else pure Python.

Set ``AMALGAM_FORGE_KERNELS=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("AMALGAM_FORGE_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _pykernels

predim = _impl.predim
predim_table = _impl.predim_table
superset_min = _impl.superset_min
dim_table = _impl.dim_table
min_value = _impl.min_value
argmin = _impl.argmin
interval_min = _impl.interval_min
pregeometry_violation = _impl.pregeometry_violation
lex_less = _impl.lex_less
BIG = _pykernels.BIG


def backends() -> dict:
    """Both implementations by name, for cross-checks and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["compiled"] = _ckernels
    except ImportError:
        pass
    return out
