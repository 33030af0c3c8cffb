"""Lattice-scan kernel with a compiled core and a pure-Python fallback.

The brute-force oracles spend nearly all their time asking one question:
is there a nonzero integer ``lam`` with ``|lam|_inf <= B`` such that
``min_i <a_i, lam> > 0`` for given integer rows ``a_i``? Both Hilbert-Mumford
and Mundet weights reduce to that form after clearing denominators.

The compiled module ``gitgauge._kernels`` is used when it was built and the
inputs fit in 64-bit arithmetic; setting ``GITGAUGE_PURE_PYTHON=1`` forces the
fallback. Both visit lattice points in the order of
:func:`gitgauge.geometry.lattice_box`, so they return the same witness.
"""
from __future__ import annotations

import os
from array import array
from typing import Optional, Sequence

from .geometry import lattice_box

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

HAVE_EXTENSION = _kernels is not None

_INT64_SAFE = 2**62


def first_positive_py(rows: Sequence[Sequence[int]], radius: int) -> Optional[tuple]:
    if not rows or radius < 1:
        return None
    r = len(rows[0])
    for lam in lattice_box(r, radius):
        if min(sum(a * x for a, x in zip(row, lam)) for row in rows) > 0:
            return lam
    return None


def _fits_int64(rows: Sequence[Sequence[int]], radius: int) -> bool:
    if not rows:
        return True
    r = len(rows[0])
    biggest = max(abs(a) for row in rows for a in row)
    return biggest * r * radius < _INT64_SAFE


def use_extension() -> bool:
    return HAVE_EXTENSION and os.environ.get("GITGAUGE_PURE_PYTHON", "") in ("", "0")


def first_positive(rows: Sequence[Sequence[int]], radius: int) -> Optional[tuple]:
    """First ``lam`` in shell order with ``min_i rows[i].lam > 0``; None if none."""
    rows = [tuple(int(a) for a in row) for row in rows]
    if use_extension() and rows and _fits_int64(rows, radius):
        flat = array("q", [a for row in rows for a in row])
        view = memoryview(flat).cast("B").cast("q", (len(rows), len(rows[0])))
        return _kernels.first_positive(view, int(radius))
    return first_positive_py(rows, radius)
