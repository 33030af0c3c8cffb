"""Combinatorial types of stable scaled curves, projective and affine.

A type is a rooted tree of components. In projective mode the root maps
isomorphically onto the target curve; every other vertex is a bubble with a
scaling class ``Zero``, ``Transition`` (finite nonzero) or ``Infinite``.
Along each root-to-leaf path the classes never increase
(Infinite > Transition > Zero) and at most one vertex is Transition.

The root's own scaling is not a bubble class: when every bubble is Zero the
root carries a free scaling in P^1 (``FreeDelta``); otherwise monotonicity
forces it to be infinite (``ForcedInfinite``). In affine mode the root is the
component holding ``z0`` and has class Transition or Infinite.

Markings are labelled, so a type has no nontrivial automorphisms and the
canonical form is a sorted nested encoding.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Optional

from . import geometry as geo

ZERO = "Zero"
TRANSITION = "Transition"
INFINITE = "Infinite"
FREE_DELTA = "FreeDelta"
FORCED_INFINITE = "ForcedInfinite"
PROJECTIVE = "projective"
AFFINE = "affine"

BUBBLE_CLASSES = (ZERO, TRANSITION, INFINITE)
_RANK = {ZERO: 0, TRANSITION: 1, INFINITE: 2}


@dataclass(frozen=True)
class Vertex:
    id: str
    cls: str
    parent: Optional[str] = None


@dataclass(frozen=True)
class CombinatorialType:
    mode: str
    vertices: tuple
    markings: tuple = ()  # sorted (label, vertex id) pairs

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "markings", tuple(sorted((int(a), str(v)) for a, v in self.markings)))

    @property
    def n(self) -> int:
        return len(self.markings)

    @property
    def root(self) -> Vertex:
        roots = [v for v in self.vertices if v.parent is None]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        return roots[0]

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def children(self, vid: str) -> list:
        return [v for v in self.vertices if v.parent == vid]

    def parents(self) -> dict:
        return {v.id: v.parent for v in self.vertices}

    def marks_at(self, vid: str) -> list:
        return [a for a, v in self.markings if v == vid]

    def edges(self) -> list:
        """Nodes of the curve, named by their child vertex."""
        return [v.id for v in self.vertices if v.parent is not None]

    def special_points(self, vid: str) -> int:
        v = self.vertex(vid)
        count = len(self.marks_at(vid)) + len(self.children(vid))
        if v.parent is not None:
            count += 1
        elif self.mode == AFFINE:
            count += 1  # z0
        return count

    def path_to_root(self, vid: str) -> list:
        """Edges (child ids) from ``vid`` up to the root."""
        par = self.parents()
        path = []
        while par[vid] is not None:
            path.append(vid)
            vid = par[vid]
        return path

    def transitions(self) -> list:
        return [v.id for v in self.vertices if v.parent is not None and v.cls == TRANSITION] + (
            [self.root.id] if self.mode == AFFINE and self.root.cls == TRANSITION else []
        )


@dataclass(frozen=True)
class ValuationAssignment:
    edges: Mapping
    delta: Fraction

    def __post_init__(self):
        edges = {str(e): geo.parse_rational(v) for e, v in dict(self.edges).items()}
        for e, v in edges.items():
            if v <= 0:
                raise ValueError(f"edge valuation for {e} must be positive, got {v}")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "delta", geo.parse_rational(self.delta))


@dataclass(frozen=True)
class StratumReport:
    dimension: int
    codimension: int
    balanced_rank: int
    vertex_details: dict = field(default_factory=dict)


# -- validation ------------------------------------------------------------


def _tree_violations(T: CombinatorialType) -> list:
    ids = [v.id for v in T.vertices]
    if len(set(ids)) != len(ids):
        return ["duplicate vertex id"]
    roots = [v for v in T.vertices if v.parent is None]
    if len(roots) != 1:
        return [f"expected exactly one root, found {len(roots)}"]
    out = []
    known = set(ids)
    for v in T.vertices:
        if v.parent is not None and v.parent not in known:
            out.append(f"vertex {v.id}: unknown parent {v.parent}")
    if out:
        return out
    par = T.parents()
    for v in T.vertices:
        seen, cur = set(), v.id
        while cur is not None:
            if cur in seen:
                return [f"vertex {v.id}: parent relation has a cycle"]
            seen.add(cur)
            cur = par[cur]
    return []


def validate_type(T: CombinatorialType) -> list[str]:
    """All invariant violations of ``T``; an empty list means valid."""
    if T.mode not in (PROJECTIVE, AFFINE):
        return [f"unknown mode {T.mode!r}"]
    out = _tree_violations(T)
    if out:
        return out
    root = T.root
    allowed_root = (FREE_DELTA, FORCED_INFINITE) if T.mode == PROJECTIVE else (TRANSITION, INFINITE)
    if root.cls not in allowed_root:
        return [f"root {root.id}: class {root.cls!r} not allowed in {T.mode} mode"]
    for v in T.vertices:
        if v.parent is not None and v.cls not in BUBBLE_CLASSES:
            out.append(f"vertex {v.id}: unknown scaling class {v.cls!r}")
    if out:
        return out

    # monotonicity, one edge at a time
    def effective(v):
        if v.cls == FREE_DELTA:
            return ZERO
        if v.cls == FORCED_INFINITE:
            return INFINITE
        return v.cls

    par = T.parents()
    for v in T.vertices:
        if v.parent is None:
            continue
        above = T.vertex(v.parent)
        pc = effective(above)
        if pc == INFINITE:
            continue
        if v.cls == ZERO:
            continue
        ancestors = []
        cur = v.parent
        while cur is not None:
            ancestors.append(T.vertex(cur))
            cur = par[cur]
        if v.cls == TRANSITION and any(a.cls == TRANSITION for a in ancestors):
            out.append(f"vertex {v.id}: two transitions on a path")
        else:
            out.append(f"vertex {v.id}: scaling class {v.cls} below a {pc} component")

    if T.mode == PROJECTIVE:
        all_zero = all(v.cls == ZERO for v in T.vertices if v.parent is not None)
        if root.cls == FORCED_INFINITE and all_zero:
            out.append(f"root {root.id}: ForcedInfinite but every bubble is Zero (use FreeDelta)")

    labels = [a for a, _ in T.markings]
    if labels != list(range(1, len(labels) + 1)):
        out.append(f"markings must be labelled 1..n exactly once, got {labels}")
    known = {v.id: v for v in T.vertices}
    for a, vid in T.markings:
        v = known.get(vid)
        if v is None:
            out.append(f"marking {a}: unknown vertex {vid}")
        elif v.cls in (INFINITE, FORCED_INFINITE):
            out.append(f"marking {a}: marking on infinite-scaling component {vid}")
    return out


def is_stable_type(T: CombinatorialType) -> tuple[bool, dict]:
    """Stability with per-vertex special-point counts.

    Zero and Infinite components need three special points, Transition
    components two. The projective root maps onto the target and is exempt.
    """
    counts = {v.id: T.special_points(v.id) for v in T.vertices}
    ok = True
    for v in T.vertices:
        if T.mode == PROJECTIVE and v.parent is None:
            continue
        need = 2 if v.cls == TRANSITION else 3
        if counts[v.id] < need:
            ok = False
    return ok, counts


# -- canonical form ----------------------------------------------------------


def _encode(T: CombinatorialType, vid: str):
    v = T.vertex(vid)
    kids = sorted(json.dumps(_encode(T, c.id), separators=(",", ":")) for c in T.children(vid))
    return [v.cls, sorted(T.marks_at(vid)), [json.loads(k) for k in kids]]


def canonical_form(T: CombinatorialType) -> bytes:
    """Byte string equal for two types iff they are isomorphic as marked rooted trees."""
    problems = _tree_violations(T)
    if problems:
        raise ValueError("; ".join(problems))
    payload = [T.mode, _encode(T, T.root.id)]
    return json.dumps(payload, separators=(",", ":")).encode()


# -- dimension bookkeeping ---------------------------------------------------


def _require_stable(T: CombinatorialType):
    problems = validate_type(T)
    if problems:
        raise ValueError("invalid type: " + "; ".join(problems))
    if not is_stable_type(T)[0]:
        raise ValueError("type is not stable")


def stratum_dimension(T: CombinatorialType) -> int:
    _require_stable(T)
    dim = 0
    for v in T.vertices:
        s = T.special_points(v.id)
        if T.mode == PROJECTIVE and v.parent is None:
            dim += s + (1 if v.cls == FREE_DELTA else 0)
            continue
        contribution = s - (2 if v.cls == TRANSITION else 3)
        assert contribution >= 0, f"negative contribution at {v.id}"
        dim += contribution
    return dim


def stratum_codimension(T: CombinatorialType) -> int:
    _require_stable(T)
    bubbles_transitions = sum(
        1 for v in T.vertices if v.parent is not None and v.cls == TRANSITION
    )
    if T.mode == AFFINE:
        indicator = 1
        bubbles_transitions += T.root.cls == TRANSITION
    else:
        indicator = 1 if T.root.cls == FORCED_INFINITE else 0
    return len(T.edges()) - bubbles_transitions + indicator


def balanced_relation_matrix(T: CombinatorialType) -> list:
    """Exponent vectors of the path relations between pairs of transition vertices.

    Columns are edges; an edge traversed towards the root gets +1, away -1.
    """
    edges = T.edges()
    col = {e: i for i, e in enumerate(edges)}
    rows = []
    for u, v in itertools.combinations(T.transitions(), 2):
        up = set(T.path_to_root(u))
        down = set(T.path_to_root(v))
        row = [0] * len(edges)
        for e in up - down:
            row[col[e]] += 1
        for e in down - up:
            row[col[e]] -= 1
        rows.append(row)
    return rows


def balanced_rank(T: CombinatorialType) -> int:
    problems = validate_type(T)
    if problems:
        raise ValueError("invalid type: " + "; ".join(problems))
    return max(0, len(T.transitions()) - 1)


def stratum_report(T: CombinatorialType) -> StratumReport:
    _, counts = is_stable_type(T)
    return StratumReport(
        stratum_dimension(T), stratum_codimension(T), balanced_rank(T), counts
    )


# -- tropical limits -----------------------------------------------------------


def tropical_limit(parents: Mapping, val: ValuationAssignment) -> dict:
    """Scaling class of each vertex in the limit of a degenerating family.

    ``w(v)`` is the valuation of delta plus the edge valuations along the path
    from the root; negative means Infinite, zero Transition, positive Zero.
    """
    if isinstance(parents, CombinatorialType):
        parents = parents.parents()
    parents = dict(parents)
    roots = [v for v, p in parents.items() if p is None]
    if len(roots) != 1:
        raise ValueError("tree shape needs exactly one root")
    missing = [v for v, p in parents.items() if p is not None and v not in val.edges]
    if missing:
        raise ValueError(f"no valuation for edges {sorted(missing)}")
    weights = {}

    def w(v):
        if v not in weights:
            p = parents[v]
            weights[v] = val.delta if p is None else w(p) + val.edges[v]
        return weights[v]

    out = {}
    for v in parents:
        x = w(v)
        out[v] = INFINITE if x < 0 else TRANSITION if x == 0 else ZERO
    return out


def limit_weights(parents: Mapping, val: ValuationAssignment) -> dict:
    """The per-vertex valuations ``w(v)`` used by :func:`tropical_limit`."""
    parents = dict(parents)
    out = {}
    for v in parents:
        total, cur = val.delta, v
        while parents[cur] is not None:
            total += val.edges[cur]
            cur = parents[cur]
        out[v] = total
    return out


# -- enumeration -------------------------------------------------------------


def _set_partitions(items: tuple) -> Iterator[list]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for size in range(len(rest) + 1):
        for others in itertools.combinations(rest, size):
            block = (first,) + others
            remaining = tuple(x for x in rest if x not in others)
            for tail in _set_partitions(remaining):
                yield [block] + tail


def _subsets(items: tuple) -> Iterator[tuple]:
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


# A subtree is (class, own markings, children subtrees sorted by min marking).


@lru_cache(maxsize=None)
def _subtrees(marks: tuple, below: bool) -> tuple:
    out = []
    for cls in (ZERO,) if below else (INFINITE, TRANSITION, ZERO):
        need = 2 if cls == TRANSITION else 3
        own_choices = [()] if cls == INFINITE else list(_subsets(marks))
        for own in own_choices:
            rest = tuple(m for m in marks if m not in own)
            for blocks in _set_partitions(rest):
                if 1 + len(own) + len(blocks) < need:
                    continue
                child_below = cls != INFINITE
                options = [_subtrees(b, child_below) for b in blocks]
                for kids in itertools.product(*options):
                    out.append((cls, own, kids))
    return tuple(out)


def _has_nonzero(node) -> bool:
    cls, _, kids = node
    return cls != ZERO or any(_has_nonzero(k) for k in kids)


def _build(mode: str, root_cls: str, own: tuple, kids: tuple) -> CombinatorialType:
    vertices, markings = [], []
    counter = itertools.count()

    def add(cls, own, kids, parent):
        vid = f"v{next(counter)}"
        vertices.append(Vertex(vid, cls, parent))
        markings.extend((a, vid) for a in own)
        for k in kids:
            add(*k, vid)

    add(root_cls, own, kids, None)
    return CombinatorialType(mode, tuple(vertices), tuple(markings))


def _root_configurations(n: int, mode: str):
    marks = tuple(range(1, n + 1))
    if mode == PROJECTIVE:
        for own in _subsets(marks):
            rest = tuple(m for m in marks if m not in own)
            for blocks in _set_partitions(rest):
                for kids in itertools.product(*(_subtrees(b, True) for b in blocks)):
                    yield FREE_DELTA, own, kids
        for blocks in _set_partitions(marks):
            for kids in itertools.product(*(_subtrees(b, False) for b in blocks)):
                if any(_has_nonzero(k) for k in kids):
                    yield FORCED_INFINITE, (), kids
    elif mode == AFFINE:
        for own in _subsets(marks):
            rest = tuple(m for m in marks if m not in own)
            for blocks in _set_partitions(rest):
                if 1 + len(own) + len(blocks) < 2:
                    continue
                for kids in itertools.product(*(_subtrees(b, True) for b in blocks)):
                    yield TRANSITION, own, kids
        for blocks in _set_partitions(marks):
            if 1 + len(blocks) < 3:
                continue
            for kids in itertools.product(*(_subtrees(b, False) for b in blocks)):
                yield INFINITE, (), kids
    else:
        raise ValueError(f"unknown mode {mode!r}")


def enumerate_types(n: int, mode: str = PROJECTIVE) -> list[CombinatorialType]:
    """All stable types with markings ``1..n``, one per isomorphism class, canonically sorted."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    seen = {}
    for root_cls, own, kids in _root_configurations(n, mode):
        T = _build(mode, root_cls, own, kids)
        seen.setdefault(canonical_form(T), T)
    return [seen[key] for key in sorted(seen)]
