"""Kernel selection: compiled core when importable, pure Python otherwise.

Set ``KVTRACE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("KVTRACE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

IMPLEMENTATION = _impl.IMPLEMENTATION
least_rotation = _impl.least_rotation
trace_coproduct_splits = _impl.trace_coproduct_splits
reduce_vector = _impl.reduce_vector
axpy = _impl.axpy

__all__ = [
    "IMPLEMENTATION",
    "least_rotation",
    "trace_coproduct_splits",
    "reduce_vector",
    "axpy",
]
