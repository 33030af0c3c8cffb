"""Exact two-phase simplex over the rationals.

Bland's rule is used for both entering and leaving variables, so the method
terminates on degenerate problems. Everything is :class:`fractions.Fraction`;
there is no tolerance anywhere.

The solver handles ``minimize c.x  s.t.  A x = b`` with each variable either
nonnegative or free. Infeasible problems return a Farkas certificate ``y``
with ``y.A <= 0`` componentwise on the nonnegative columns, ``y.A == 0`` on
the free columns and ``y.b > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple] = None
    value: Optional[Fraction] = None
    farkas: Optional[tuple] = field(default=None, repr=False)


class _Tableau:
    """Dense tableau ``[A | b]`` plus a reduced-cost row, pivoted in place."""

    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r, j):
        row = self.rows[r]
        p = row[j]
        if p != 1:
            inv = 1 / p
            row[:] = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[j]
            if f:
                other[:] = [a - f * b for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = j

    def reduced_costs(self, cost):
        rc = list(cost)
        for i, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb:
                rc = [a - cb * b for a, b in zip(rc, self.rows[i])]
        return rc

    def run(self, cost, allowed):
        """Minimize ``cost`` over the current basis; returns False if unbounded."""
        while True:
            rc = self.reduced_costs(cost)
            entering = next((j for j in allowed if rc[j] < 0), None)
            if entering is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], entering)


def solve(
    c: Sequence,
    A: Sequence[Sequence],
    b: Sequence,
    free: Sequence[bool] | None = None,
) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b``; ``free[j]`` marks unsigned variables."""
    m = len(A)
    n = len(c)
    free = list(free) if free is not None else [False] * n
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    for row in A:
        if len(row) != n:
            raise ValueError("constraint row length does not match objective")
    if len(b) != m or len(free) != n:
        raise ValueError("inconsistent LP dimensions")

    # Free variables are split x = x+ - x-; column map back to the caller's x.
    cols = []
    for j in range(n):
        cols.append((j, _ONE))
        if free[j]:
            cols.append((j, -_ONE))
    N = len(cols)
    signs = [(-_ONE if bi < 0 else _ONE) for bi in b]
    rows = []
    for i in range(m):
        s = signs[i]
        row = [s * A[i][j] * sign for j, sign in cols]
        row.extend(_ONE if k == i else _ZERO for k in range(m))
        rows.append(row)
    rhs = [s * bi for s, bi in zip(signs, b)]
    tab = _Tableau(rows, rhs, [N + i for i in range(m)])

    phase1 = [_ZERO] * N + [_ONE] * m
    tab.run(phase1, range(N + m))
    infeas = sum(rhs[i] for i, bj in enumerate(tab.basis) if bj >= N)
    if infeas > 0:
        rc = tab.reduced_costs(phase1)
        y = tuple(signs[i] * (1 - rc[N + i]) for i in range(m))
        return LPResult(INFEASIBLE, farkas=y)

    # Drive zero-level artificials out of the basis; drop redundant rows.
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= N:
            j = next((j for j in range(N) if tab.rows[r][j] != 0), None)
            if j is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, j)
        r += 1

    cost = [c[j] * sign for j, sign in cols] + [_ZERO] * m
    if not tab.run(cost, range(N)):
        return LPResult(UNBOUNDED)
    z = [_ZERO] * N
    for i, bj in enumerate(tab.basis):
        z[bj] = tab.rhs[i]
    x = [_ZERO] * n
    for k, (j, sign) in enumerate(cols):
        x[j] += sign * z[k]
    value = sum((cj * xj for cj, xj in zip(c, x)), _ZERO)
    return LPResult(OPTIMAL, x=tuple(x), value=value)
