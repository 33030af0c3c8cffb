"""Exact rational linear algebra and polyhedral primitives.

Vectors are plain tuples of :class:`fractions.Fraction`. Every stability test
in the package reduces to one of the operations here: hull membership with a
certificate, position relative to the affine hull, the metric-closest point of
a hull, and the parameters at which a ray enters or leaves a hull.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Optional, Sequence

from . import lp

Vector = tuple

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class DimensionError(ValueError):
    """Vectors of different lengths were combined."""


def parse_rational(value) -> Fraction:
    """Accept an int, a Fraction, or a string ``"p"`` / ``"p/q"``; reject decimals."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if m is None:
            raise ValueError(f"not a rational literal (use 'p/q' or an integer): {value!r}")
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValueError(f"zero denominator: {value!r}")
        return Fraction(int(m.group(1)), den)
    raise ValueError(f"not a rational: {value!r}")


def format_rational(q: Fraction):
    """Integers stay JSON integers; everything else becomes ``"p/q"``."""
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def vec(values: Iterable) -> Vector:
    return tuple(parse_rational(v) for v in values)


def _check_dims(*vectors: Sequence) -> int:
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop() if dims else 0


def dot(u: Sequence, v: Sequence) -> Fraction:
    _check_dims(u, v)
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> Vector:
    _check_dims(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    _check_dims(u, v)
    return tuple(a - b for a, b in zip(u, v))


def scale(t, v: Sequence) -> Vector:
    return tuple(t * a for a in v)


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by exact Gaussian elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(rk + 1, len(m)):
            f = m[i][col] / m[rk][col]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        rk += 1
    return rk


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[Vector]:
    """Solve a square system exactly; None if singular."""
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [a / p for a in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return tuple(row[n] for row in aug)


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    m = [list(map(Fraction, row)) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for i in range(col + 1, n):
            f = m[i][col] / m[col][col]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def integerize(v: Sequence) -> tuple:
    """Smallest positive integer multiple of a rational vector, as ints."""
    v = [Fraction(a) for a in v]
    den = lcm(*(a.denominator for a in v)) if v else 1
    ints = [int(a * den) for a in v]
    g = gcd(*ints)
    if g > 1:
        ints = [a // g for a in ints]
    return tuple(ints)


@dataclass(frozen=True)
class InnerProduct:
    """Symmetric positive definite rational form ``(u, v) = u^T G v``."""

    matrix: tuple

    def __post_init__(self):
        g = tuple(tuple(parse_rational(a) for a in row) for row in self.matrix)
        object.__setattr__(self, "matrix", g)
        r = len(g)
        if any(len(row) != r for row in g):
            raise ValueError("inner product matrix must be square")
        for i in range(r):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("inner product matrix must be symmetric")
        for k in range(1, r + 1):
            if determinant([row[:k] for row in g[:k]]) <= 0:
                raise ValueError(f"inner product not positive definite (leading minor {k})")

    @classmethod
    def identity(cls, r: int) -> "InnerProduct":
        return cls(tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def is_identity(self) -> bool:
        return all(a == (i == j) for i, row in enumerate(self.matrix) for j, a in enumerate(row))

    def apply(self, v: Sequence) -> Vector:
        _check_dims(v, self.matrix)
        return tuple(dot(row, v) for row in self.matrix)

    def __call__(self, u: Sequence, v: Sequence) -> Fraction:
        return dot(u, self.apply(v))

    def norm2(self, v: Sequence) -> Fraction:
        return self(v, v)

    def inverse(self) -> "InnerProduct":
        r = self.rank
        cols = [solve_linear(self.matrix, [int(i == j) for i in range(r)]) for j in range(r)]
        return InnerProduct(tuple(tuple(cols[j][i] for j in range(r)) for i in range(r)))


class Position(enum.Enum):
    OUTSIDE = "Outside"
    RELATIVE_BOUNDARY = "RelativeBoundary"
    RELATIVE_INTERIOR = "RelativeInterior"


@dataclass(frozen=True)
class HullMembership:
    inside: bool
    coefficients: Optional[Vector] = None
    covector: Optional[Vector] = None
    bound: Optional[Fraction] = None
    margin: Optional[Fraction] = None


def _points_and_query(points, q):
    points = [vec(p) for p in points]
    if not points:
        raise ValueError("hull of an empty point set")
    q = vec(q)
    _check_dims(q, *points)
    return points, q


def hull_contains(points: Sequence[Sequence], q: Sequence) -> HullMembership:
    """Decide ``q in conv(points)`` exactly, with a certificate either way.

    Inside: convex coefficients reproducing ``q``. Outside: a covector ``xi``
    and bound ``c`` with ``xi.p <= c`` for every point and ``xi.q > c``.
    """
    points, q = _points_and_query(points, q)
    r = len(q)
    n = len(points)
    A = [[p[i] for p in points] for i in range(r)] + [[1] * n]
    b = list(q) + [1]
    res = lp.solve([0] * n, A, b)
    if res.status == lp.OPTIMAL:
        return HullMembership(True, coefficients=res.x)
    y = res.farkas
    xi = tuple(y[:r])
    c = -y[r]
    return HullMembership(False, covector=xi, bound=c, margin=dot(xi, q) - c)


def affine_dimension(points: Sequence[Sequence]) -> int:
    points = [vec(p) for p in points]
    _check_dims(*points)
    if not points:
        return -1
    return rank([sub(p, points[0]) for p in points[1:]])


def ray_interval(points, base, direction):
    """Exact ``{t >= 0 : base + t*direction in hull}`` as (lo, hi); hi None = unbounded.

    None when the ray misses the hull.
    """
    points, base = _points_and_query(points, base)
    direction = vec(direction)
    _check_dims(base, direction)
    n = len(points)
    r = len(base)
    A = [[p[i] for p in points] + [-direction[i]] for i in range(r)]
    A.append([1] * n + [0])
    b = list(base) + [1]
    lo = lp.solve([0] * n + [1], A, b)
    if lo.status == lp.INFEASIBLE:
        return None
    hi = lp.solve([0] * n + [-1], A, b)
    return lo.value, (None if hi.status == lp.UNBOUNDED else -hi.value)


def hull_position(points: Sequence[Sequence], q: Sequence) -> tuple[Position, int]:
    """Position of ``q`` relative to the hull, measured inside its affine hull."""
    points, q = _points_and_query(points, q)
    dim = affine_dimension(points)
    if not hull_contains(points, q).inside:
        return Position.OUTSIDE, dim
    n = len(points)
    centroid = tuple(sum(p[i] for p in points) / n for i in range(len(q)))
    if q == centroid:
        return Position.RELATIVE_INTERIOR, dim
    # The centroid is relatively interior; q is interior iff the ray from the
    # centroid through q continues past q inside the hull.
    _, hi = ray_interval(points, centroid, sub(q, centroid))
    if hi is None or hi > 1:
        return Position.RELATIVE_INTERIOR, dim
    return Position.RELATIVE_BOUNDARY, dim


def ray_boundary_crossings(
    points: Sequence[Sequence], base: Sequence, direction: Sequence
) -> list[Fraction]:
    """Positive parameters where ``base + t*direction`` enters or leaves the hull.

    The set of ``t >= 0`` with the ray point in the hull is a closed interval;
    its positive finite endpoints are returned in increasing order. A ray that
    meets the hull in a single point yields that one parameter.
    """
    points, base = _points_and_query(points, base)
    direction = vec(direction)
    _check_dims(base, direction)
    if not any(direction):
        return []
    interval = ray_interval(points, base, direction)
    if interval is None:
        return []
    lo, hi = interval
    out = []
    if lo > 0:
        out.append(lo)
    if hi is not None and hi > 0 and hi != lo:
        out.append(hi)
    return out


def closest_point(points: Sequence[Sequence], metric: InnerProduct | None = None) -> Vector:
    """Metric-minimum-norm point of ``conv(points)``, by exact face enumeration.

    Faces are scanned as affinely independent subsets in order of size; on each
    the KKT system is solved exactly and the first nonnegative solution that
    satisfies the variational inequality against every point is returned.
    """
    pts = []
    for p in points:
        p = vec(p)
        if p not in pts:
            pts.append(p)
    if not pts:
        raise ValueError("closest point of an empty hull")
    _check_dims(*pts)
    r = len(pts[0])
    metric = metric or InnerProduct.identity(r)
    if metric.rank != r:
        raise DimensionError("metric rank does not match point dimension")
    gram = [[metric(p, q) for q in pts] for p in pts]
    for size in range(1, min(len(pts), r + 1) + 1):
        for face in itertools.combinations(range(len(pts)), size):
            if affine_dimension([pts[i] for i in face]) != size - 1:
                continue
            # [G 1; 1^T 0] [alpha; -nu] = [0; 1]
            system = [[gram[i][j] for j in face] + [1] for i in face]
            system.append([1] * size + [0])
            sol = solve_linear(system, [0] * size + [1])
            if sol is None:
                continue
            alpha = sol[:size]
            if any(a < 0 for a in alpha):
                continue
            c = tuple(sum(a * pts[i][k] for a, i in zip(alpha, face)) for k in range(r))
            cc = metric(c, c)
            if all(metric(p, c) >= cc for p in pts):
                return c
    raise AssertionError("face enumeration found no minimizer")  # unreachable for convex hulls


def lattice_box(r: int, B: int) -> Iterator[tuple]:
    """Nonzero integer vectors of sup-norm at most ``B``, shell by shell.

    Within the shell of sup-norm ``s`` the order is lexicographic; the compiled
    scan kernel uses the same order so both return the same first witness.
    """
    if r < 1 or B < 1:
        raise ValueError("lattice_box needs r >= 1 and B >= 1")
    for s in range(1, B + 1):
        for v in itertools.product(range(-s, s + 1), repeat=r):
            if max(abs(a) for a in v) == s:
                yield v
