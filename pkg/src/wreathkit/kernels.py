"""Kernel selection: the compiled extension when importable, else pure Python.

Set WREATHKIT_PURE=1 to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

COMPILED = False
if not os.environ.get("WREATHKIT_PURE"):
    try:
        from . import _ckernels as _impl
        COMPILED = True
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

# compiled code works on 64-bit integers; larger inputs use the fallback
_SAFE = 1 << 40


def residue_nonzero(starts, periods, values, r, length, modulus, limit):
    if COMPILED and all(-_SAFE < v < _SAFE for v in values) and len(periods) < 4096 and modulus < _SAFE:
        return _impl.residue_nonzero(starts, periods, values, r, length, modulus, limit)
    return _kernels_py.residue_nonzero(starts, periods, values, r, length, modulus, limit)


def table_first_failure(table, seqs, identity, count):
    if COMPILED and len(table) <= 4096:
        return _impl.table_first_failure(table, seqs, identity, count)
    return _kernels_py.table_first_failure(table, seqs, identity, count)
