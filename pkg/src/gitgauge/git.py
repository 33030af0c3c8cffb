"""Hilbert-Mumford classification and Kirwan-Ness strata for torus actions on P(V).

A torus of rank ``r`` acts on ``P(V)`` with weights ``mu_1..mu_m`` and the
linearization is shifted by ``theta``. For a torus the stability of a point
depends only on its support, the set of coordinates where it is nonzero, so
supports are the unit of classification throughout.

Weights and ``theta`` are covectors; one-parameter subgroups are integer
coweights. ``mu(lam)`` is the plain pairing. The inner product on coweights
enters only through norms and the identification of covectors with coweights.

For a torus the parabolic attached to a stratum is the whole group, so each
stratum is described by its index ``lam``, the fixed-point filter ``Z_lam`` and
its member supports.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import geometry as geo
from .geometry import InnerProduct, Position


@dataclass(frozen=True)
class WeightSystem:
    rank: int
    weights: tuple
    theta: tuple
    metric: Optional[InnerProduct] = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        weights = tuple(geo.vec(w) for w in self.weights)
        theta = geo.vec(self.theta)
        if not weights:
            raise ValueError("at least one weight is required")
        for w in weights + (theta,):
            if len(w) != self.rank:
                raise geo.DimensionError(
                    f"vector {[str(a) for a in w]} has length {len(w)}, rank is {self.rank}"
                )
        metric = self.metric or InnerProduct.identity(self.rank)
        if metric.rank != self.rank:
            raise geo.DimensionError("metric size does not match rank")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "metric", metric)

    @property
    def m(self) -> int:
        return len(self.weights)

    def weight(self, i: int) -> tuple:
        """Weight of the 1-based coordinate ``i``."""
        return self.weights[i - 1]

    def supports(self) -> Iterable["Support"]:
        """Every nonempty support, in increasing size then lexicographic order."""
        for size in range(1, self.m + 1):
            for idx in itertools.combinations(range(1, self.m + 1), size):
                yield Support(idx)

    def dual_metric(self) -> InnerProduct:
        return self.metric.inverse()

    def to_coweight(self, covector: Sequence) -> tuple:
        """Image of a covector under the metric identification g^v -> g."""
        if self.metric.is_identity():
            return tuple(covector)
        return self.dual_metric().apply(covector)


@dataclass(frozen=True, order=True)
class Support:
    indices: tuple

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        if not idx:
            raise ValueError("support must be nonempty")
        if idx[0] < 1:
            raise ValueError("support indices are 1-based")
        object.__setattr__(self, "indices", idx)

    def check(self, ws: WeightSystem) -> "Support":
        if self.indices[-1] > ws.m:
            raise ValueError(f"support index {self.indices[-1]} exceeds number of weights {ws.m}")
        return self

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True)
class StabilityClass:
    semistable: bool
    polystable: bool
    stable: bool

    def __post_init__(self):
        assert self.semistable or not self.polystable
        assert self.polystable or not self.stable


@dataclass(frozen=True)
class KNStratum:
    lam: tuple
    fixed_support_filter: tuple
    members: tuple = field(default=())
    limit_supports: tuple = field(default=())


def _points(ws: WeightSystem, S: Support) -> list:
    S.check(ws)
    return [ws.weight(i) for i in S]


def hm_weight(ws: WeightSystem, S: Support, lam: Sequence[int]) -> Fraction:
    """Hilbert-Mumford weight ``min_{i in S} -mu_i(lam) + theta(lam)``."""
    lam = tuple(int(a) for a in lam)
    if len(lam) != ws.rank:
        raise geo.DimensionError("one-parameter subgroup has wrong rank")
    nu = min(-geo.dot(ws.weight(i), lam) for i in S.check(ws))
    return nu + geo.dot(ws.theta, lam)


def classify(ws: WeightSystem, S: Support) -> StabilityClass:
    pos, dim = geo.hull_position(_points(ws, S), ws.theta)
    semistable = pos is not Position.OUTSIDE
    polystable = pos is Position.RELATIVE_INTERIOR
    return StabilityClass(semistable, polystable, polystable and dim == ws.rank)


def span_reading_disagrees(ws: WeightSystem, S: Support) -> bool:
    """True when 'stable' differs between affine-hull and linear-span dimension.

    The classification uses the affine hull of the weights in ``S``; reading
    the stable condition through their linear span instead gives a different
    answer exactly when the span is full but the affine hull is not.
    """
    pts = _points(ws, S)
    if not classify(ws, S).polystable:
        return False
    return (geo.affine_dimension(pts) == ws.rank) != (geo.rank(pts) == ws.rank)


def separating_witness(ws: WeightSystem, S: Support) -> Optional[tuple]:
    """Integer one-parameter subgroup with positive weight, read off the hull certificate."""
    cert = geo.hull_contains(_points(ws, S), ws.theta)
    if cert.inside:
        return None
    lam = geo.integerize(cert.covector)
    assert hm_weight(ws, S, lam) > 0
    return lam


def certified_radius(ws: WeightSystem, S: Support) -> int:
    """Sup-norm of the certificate witness; 0 for semistable supports."""
    lam = separating_witness(ws, S)
    return 0 if lam is None else max(abs(a) for a in lam)


def optimal_destabilizer(ws: WeightSystem, S: Support) -> Optional[tuple]:
    """The rational coweight ``lam`` with ``hm_weight(S, lam) = (lam, lam)``, or None.

    ``lam`` is the coweight dual to the point of ``hull{theta - mu_i}`` closest
    to the origin in the dual metric.
    """
    if classify(ws, S).semistable:
        return None
    pts = [geo.sub(ws.theta, ws.weight(i)) for i in S]
    c = geo.closest_point(pts, ws.dual_metric() if not ws.metric.is_identity() else None)
    lam = ws.to_coweight(c)
    assert any(lam)
    return lam


def rational_hm_weight(ws: WeightSystem, S: Support, lam: Sequence) -> Fraction:
    """``hm_weight`` extended to rational coweights (positively homogeneous)."""
    return min(geo.dot(geo.sub(ws.theta, ws.weight(i)), lam) for i in S.check(ws))


def limit_support(ws: WeightSystem, S: Support, lam: Sequence) -> Support:
    """Support of ``lim_{z->0} z^lam x``: the coordinates attaining ``min -mu_i(lam)``."""
    vals = {i: -geo.dot(ws.weight(i), lam) for i in S.check(ws)}
    nu = min(vals.values())
    return Support(tuple(i for i, v in vals.items() if v == nu))


def fixed_filter(ws: WeightSystem, lam: Sequence) -> tuple:
    """Coordinates ``i`` with ``(theta - mu_i)(lam) = (lam, lam)``, describing ``Z_lam``."""
    target = ws.metric.norm2(lam)
    return tuple(
        i for i in range(1, ws.m + 1) if geo.dot(geo.sub(ws.theta, ws.weight(i)), lam) == target
    )


def kn_partition(ws: WeightSystem) -> list[KNStratum]:
    """Group unstable supports by optimal destabilizer, sorted by stratum index."""
    from .parallel import pmap

    supports = list(ws.supports())
    lams = pmap(_destabilizer_job, [(ws, S) for S in supports])
    groups: dict = {}
    for S, lam in zip(supports, lams):
        if lam is not None:
            groups.setdefault(lam, []).append(S)
    strata = []
    for lam in sorted(groups):
        members = tuple(groups[lam])
        limits = tuple(limit_support(ws, S, lam) for S in members)
        strata.append(KNStratum(lam, fixed_filter(ws, lam), members, limits))
    return strata


def _destabilizer_job(args):
    ws, S = args
    return optimal_destabilizer(ws, S)


def kn_candidates(ws: WeightSystem) -> set:
    """The index set ``C(X)``: distinct optimal destabilizers of unstable supports."""
    return {stratum.lam for stratum in kn_partition(ws)}
