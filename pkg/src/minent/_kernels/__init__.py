"""Hot word/search kernels: compiled extension when built, else pure Python.

Set ``MINENT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels as python_kernels

try:
    if os.environ.get("MINENT_PURE_PYTHON"):
        raise ImportError("pure-python kernels forced")
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = python_kernels
    BACKEND = "python"

INV_TABLE = python_kernels.INV_TABLE
inverse = _impl.inverse
free_reduce = _impl.free_reduce
free_mul = _impl.free_mul
dehn_reduce = _impl.dehn_reduce
expand_layer = _impl.expand_layer
lifted_dijkstra = _impl.lifted_dijkstra

__all__ = [
    "BACKEND",
    "INV_TABLE",
    "dehn_reduce",
    "expand_layer",
    "free_mul",
    "free_reduce",
    "inverse",
    "lifted_dijkstra",
    "python_kernels",
]
