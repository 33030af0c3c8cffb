"""Brute-force cross-checks for the analytic modules.

Nothing here calls into :mod:`gitgauge.git`, :mod:`gitgauge.mundet` or
:mod:`gitgauge.scaled`; the oracles read the plain data of their inputs and
recompute everything from scratch. Shared code is limited to rational scalar
helpers and the lattice-scan kernel.

Lattice scans are only sound when the box is large enough to contain a
destabilizing direction. Callers supply the radius, and the acceptance suite
derives it from the exact separating certificate of the analytic side.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional, Sequence

from .geometry import parse_rational
from .kernels import first_positive

_Z, _T, _I = "Zero", "Transition", "Infinite"
_FREE, _FORCED = "FreeDelta", "ForcedInfinite"


class CapTooSmall(ValueError):
    """A stable type reached the vertex cap, so larger ones may be missing."""


@dataclass(frozen=True)
class OracleBudget:
    lattice_radius: int = 4
    k_grid: tuple = ()
    tree_vertex_cap: int = 7

    def __post_init__(self):
        if self.lattice_radius < 1:
            raise ValueError("lattice_radius must be at least 1")
        if self.tree_vertex_cap < 1:
            raise ValueError("tree_vertex_cap must be at least 1")
        grid = tuple(parse_rational(k) for k in self.k_grid)
        if any(k <= 0 for k in grid):
            raise ValueError("k_grid entries must be positive")
        object.__setattr__(self, "k_grid", grid)


@dataclass(frozen=True)
class OracleVerdict:
    semistable: bool
    witness: Optional[tuple] = None
    weight: Optional[Fraction] = None


@dataclass(frozen=True)
class TreeReport:
    n: int
    mode: str
    oracle_count: int
    enumerated_count: int
    missing: tuple = field(default=())  # found by the oracle only
    extra: tuple = field(default=())  # produced by enumerate_types only

    @property
    def identical(self) -> bool:
        return not self.missing and not self.extra


# -- lattice scans ---------------------------------------------------------


def _scan(rows: list, radius: int) -> OracleVerdict:
    den = lcm(*(Fraction(a).denominator for row in rows for a in row))
    int_rows = [[int(Fraction(a) * den) for a in row] for row in rows]
    lam = first_positive(int_rows, radius)
    if lam is None:
        return OracleVerdict(True)
    weight = min(sum(Fraction(a) * x for a, x in zip(row, lam)) for row in rows)
    return OracleVerdict(False, lam, weight)


def brute_force_classify(ws, S, budget: OracleBudget) -> OracleVerdict:
    """Search the box for ``lam`` with ``min_{i in S} (theta - mu_i)(lam) > 0``."""
    theta = [Fraction(a) for a in ws.theta]
    rows = [[t - Fraction(w) for t, w in zip(theta, ws.weights[i - 1])] for i in S]
    return _scan(rows, budget.lattice_radius)


def _metric_dual(ws, dP) -> list:
    matrix = ws.metric.matrix
    return [sum(Fraction(a) * b for a, b in zip(row, dP)) for row in matrix]


def brute_force_mundet(d, k, budget: OracleBudget) -> OracleVerdict:
    """Search the box for ``lam`` with positive Mundet weight at power ``k``.

    The weight is ``-(dP^v, lam) + k * min_i (theta - mu_i)(lam)``, which is
    the minimum over ``i`` of a linear form in ``lam``.
    """
    k = parse_rational(k)
    if k <= 0:
        raise ValueError("k must be positive")
    ws = d.ws
    dPv = _metric_dual(ws, d.dP)
    theta = [Fraction(a) for a in ws.theta]
    rows = []
    for i in d.support:
        mu = ws.weights[i - 1]
        rows.append([k * (t - Fraction(w)) - v for t, w, v in zip(theta, mu, dPv)])
    return _scan(rows, budget.lattice_radius)


@dataclass(frozen=True)
class _Datum:
    ws: object
    dP: tuple
    support: tuple


def scan_walls(ws, S, dP, grid: Sequence, radius: int) -> list:
    """Consecutive grid pairs ``(a, b)`` where the brute-force verdict flips."""
    grid = [parse_rational(k) for k in grid]
    if grid != sorted(grid) or len(set(grid)) != len(grid):
        raise ValueError("grid must be strictly increasing")
    budget = OracleBudget(lattice_radius=max(1, radius))
    d = _Datum(ws, tuple(dP), tuple(S))
    verdicts = [brute_force_mundet(d, k, budget).semistable for k in grid]
    return [
        (grid[j], grid[j + 1])
        for j in range(len(grid) - 1)
        if verdicts[j] != verdicts[j + 1]
    ]


# -- scaled curve types ----------------------------------------------------


@lru_cache(maxsize=None)
def _rooted_trees(size: int) -> tuple:
    """Unlabelled rooted trees as nested sorted tuples of children."""
    if size == 1:
        return ((),)
    out = set()

    def build(remaining, min_child, acc):
        if remaining == 0:
            out.add(tuple(sorted(acc)))
            return
        for s in range(1, remaining + 1):
            for t in _rooted_trees(s):
                if min_child is not None and (s, t) < min_child:
                    continue
                build(remaining - s, (s, t), acc + [t])

    build(size - 1, None, [])
    return tuple(sorted(out))


def _flatten(tree) -> list:
    """Parent list in preorder; the root has parent -1."""
    parents = []

    def walk(t, parent):
        me = len(parents)
        parents.append(parent)
        for c in t:
            walk(c, me)

    walk(tree, -1)
    return parents


def _class_assignments(parents: list, mode: str):
    """Class lists obeying the monotonicity rule, pruned depth-first."""
    v = len(parents)
    roots = (_FREE, _FORCED) if mode == "projective" else (_T, _I)

    def rec(i, classes):
        if i == v:
            yield list(classes)
            return
        p = classes[parents[i]]
        # only an infinite parent admits non-Zero children
        options = (_I, _T, _Z) if p in (_I, _FORCED) else (_Z,)
        for c in options:
            classes.append(c)
            yield from rec(i + 1, classes)
            classes.pop()

    for rc in roots:
        yield from rec(1, [rc])


def _minimum_marks(mode, classes, nkids):
    """Markings each markable vertex needs for stability; None if some vertex cannot be stable."""
    mins = {}
    for i, c in enumerate(classes):
        need = 0 if (i == 0 and mode == "projective") else (2 if c == _T else 3)
        short = max(0, need - nkids[i] - 1)
        if c in (_I, _FORCED):
            if short:
                return None
        else:
            mins[i] = short
    return mins


def _marking_counts(n: int, slots: list, mins: dict):
    if not slots:
        if n == 0:
            yield {}
        return
    first, rest = slots[0], slots[1:]
    spare = n - sum(mins[j] for j in rest)
    for c in range(mins[first], spare + 1):
        for tail in _marking_counts(n - c, rest, mins):
            yield {first: c, **tail}


def _oracle_key(mode, classes, parents, marks) -> str:
    children = {i: [] for i in range(len(classes))}
    for i, p in enumerate(parents):
        if p >= 0:
            children[p].append(i)

    def enc(i):
        return (classes[i], tuple(sorted(marks.get(i, ()))), tuple(sorted(enc(c) for c in children[i])))

    return repr((mode, enc(0)))


def _oracle_types(n: int, mode: str, cap: int) -> set:
    found = set()
    labels = tuple(range(1, n + 1))
    for size in range(1, cap + 1):
        for tree in _rooted_trees(size):
            parents = _flatten(tree)
            nkids = [0] * size
            for p in parents[1:]:
                nkids[p] += 1
            for classes in _class_assignments(parents, mode):
                if mode == "projective":
                    all_zero = all(c == _Z for c in classes[1:])
                    if (classes[0] == _FREE) != all_zero:
                        continue
                if _two_transitions(parents, classes):
                    continue
                mins = _minimum_marks(mode, classes, nkids)
                if mins is None or sum(mins.values()) > n:
                    continue
                for counts in _marking_counts(n, sorted(mins), mins):
                    if not _stable_counts(mode, classes, nkids, counts):
                        continue
                    if size == cap:
                        raise CapTooSmall(f"stable type with {cap} vertices; raise the cap")
                    for marks in _distribute(labels, counts):
                        found.add(_oracle_key(mode, classes, parents, marks))
    return found


def _two_transitions(parents, classes) -> bool:
    for i in range(len(classes)):
        seen, cur = 0, i
        while cur >= 0:
            seen += classes[cur] == _T
            cur = parents[cur]
        if seen > 1:
            return True
    return False


def _stable_counts(mode, classes, nkids, counts) -> bool:
    for i, c in enumerate(classes):
        special = counts.get(i, 0) + nkids[i] + 1  # parent edge, or z0 at an affine root
        if i == 0 and mode == "projective":
            continue
        if special < (2 if c == _T else 3):
            return False
    return True


def _distribute(labels: tuple, counts: dict):
    slots = [i for i, c in counts.items() if c]
    if not slots:
        yield {}
        return

    def rec(remaining, j, acc):
        if j == len(slots):
            yield dict(acc)
            return
        for pick in itertools.combinations(remaining, counts[slots[j]]):
            acc[slots[j]] = pick
            rest = tuple(x for x in remaining if x not in pick)
            yield from rec(rest, j + 1, acc)
        acc.pop(slots[j], None)

    yield from rec(labels, 0, {})


def _key_of_type(T) -> str:
    ids = [v.id for v in T.vertices]
    root = next(v for v in T.vertices if v.parent is None)
    order = [root.id] + [i for i in ids if i != root.id]
    index = {vid: j for j, vid in enumerate(order)}
    by_id = {v.id: v for v in T.vertices}
    classes = [by_id[vid].cls for vid in order]
    parents = [-1 if by_id[vid].parent is None else index[by_id[vid].parent] for vid in order]
    marks: dict = {}
    for label, vid in T.markings:
        marks.setdefault(index[vid], []).append(label)
    return _oracle_key(T.mode, classes, parents, marks)


def exhaustive_tree_check(n: int, cap: int, mode: str = "projective") -> TreeReport:
    """Diff ``enumerate_types(n, mode)`` against generate-all-trees-then-filter."""
    from .scaled import enumerate_types

    if n < 0:
        raise ValueError("n must be nonnegative")
    oracle = _oracle_types(n, mode, cap)
    enumerated = {_key_of_type(T) for T in enumerate_types(n, mode)}
    return TreeReport(
        n,
        mode,
        len(oracle),
        len(enumerated),
        tuple(sorted(oracle - enumerated)),
        tuple(sorted(enumerated - oracle)),
    )


def minimal_tree_cap(n: int, mode: str = "projective") -> int:
    """Smallest cap that cannot be reached by a stable type with ``n`` markings."""
    if mode == "projective":
        return 2 * n + 1 if n else 2
    return max(2 * n, 1)
