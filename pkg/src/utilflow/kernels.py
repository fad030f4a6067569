"""Kernel backend selection.

The compiled Cython kernels are used when the extension was built; otherwise
(or when ``UTILFLOW_PURE_PYTHON`` is set to a non-empty value) the pure-Python
twin is imported. Both expose the same functions and produce identical floats.
"""

from __future__ import annotations

import os

if os.environ.get("UTILFLOW_PURE_PYTHON"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

BACKEND: str = _impl.BACKEND
CLASSICAL: int = _impl.CLASSICAL
HYPERBOLIC: int = _impl.HYPERBOLIC
CAPITAL_AWARE: int = _impl.CAPITAL_AWARE

utility = _impl.utility
invert = _impl.invert
future_value = _impl.future_value
utility_many = _impl.utility_many
future_value_many = _impl.future_value_many

__all__ = [
    "BACKEND",
    "CAPITAL_AWARE",
    "CLASSICAL",
    "HYPERBOLIC",
    "future_value",
    "future_value_many",
    "invert",
    "utility",
    "utility_many",
]
