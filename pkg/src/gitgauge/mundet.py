"""Mundet stability for torus-gauged maps from a curve to P(V).

A gauged map is recorded by its discrete invariants: the bundle degree
``dP`` (an integer coweight), the section degree ``du`` and the support of the
section. With ``dPv`` the metric image of ``dP``, the map is semistable for the
linearization raised to the power ``k`` iff

    theta - dPv / k  lies in  hull{ mu_i : i in support },

equivalently every one-parameter subgroup has nonpositive weight
``-(dPv, lam) + k * min_i (theta - mu_i)(lam)``. With this sign the energy
``(theta, dP) + du`` of a semistable map with feasible degrees is bounded
below by ``(dPv, dP) >= 0``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import geometry as geo
from . import lp
from .geometry import Position
from .git import Support, WeightSystem

AT_K = "at-k"
LARGE_K = "large-k"


class UnboundedFamily(ValueError):
    """The degree search region cannot be certified finite."""


class RiemannRochError(ValueError):
    """A line-bundle degree is outside the range where h^1 vanishes."""


@dataclass(frozen=True)
class GaugedMapDatum:
    ws: WeightSystem
    dP: tuple
    du: int
    support: Support

    def __post_init__(self):
        dP = tuple(self.dP)
        if any(Fraction(a).denominator != 1 for a in dP):
            raise ValueError("bundle degree dP must be integral")
        dP = tuple(int(a) for a in dP)
        if len(dP) != self.ws.rank:
            raise geo.DimensionError("dP has wrong rank")
        if Fraction(self.du).denominator != 1:
            raise ValueError("section degree du must be an integer")
        object.__setattr__(self, "dP", dP)
        object.__setattr__(self, "du", int(self.du))
        self.support.check(self.ws)

    @property
    def dPv(self) -> tuple:
        """``d(P)^v``: the covector metric-dual to ``dP``."""
        return self.ws.metric.apply(self.dP)

    def sort_key(self):
        return (self.support.indices, self.dP, self.du)


@dataclass(frozen=True)
class MundetClass:
    semistable: bool
    polystable: bool
    stable: bool


@dataclass(frozen=True)
class WallSet:
    walls: tuple
    degenerate_supports: tuple = field(default=())


@dataclass(frozen=True)
class LargeK:
    semistable: bool
    threshold: Fraction


def _positive_k(k) -> Fraction:
    k = geo.parse_rational(k)
    if k <= 0:
        raise ValueError("polarization power k must be positive")
    return k


def _hull(d: GaugedMapDatum) -> list:
    return [d.ws.weight(i) for i in d.support]


def mundet_weight(d: GaugedMapDatum, k, lam: Sequence[int]) -> Fraction:
    k = _positive_k(k)
    lam = tuple(int(a) for a in lam)
    ws = d.ws
    hm = min(geo.dot(geo.sub(ws.theta, ws.weight(i)), lam) for i in d.support)
    return -geo.dot(d.dPv, lam) + k * hm


def shifted_theta(d: GaugedMapDatum, k) -> tuple:
    """``theta - dPv / k``, the point tested against the weight hull."""
    k = _positive_k(k)
    return geo.sub(d.ws.theta, geo.scale(1 / k, d.dPv))


def mundet_classify(d: GaugedMapDatum, k) -> MundetClass:
    pos, dim = geo.hull_position(_hull(d), shifted_theta(d, k))
    semistable = pos is not Position.OUTSIDE
    polystable = pos is Position.RELATIVE_INTERIOR
    return MundetClass(semistable, polystable, polystable and dim == d.ws.rank)


def certified_radius(d: GaugedMapDatum, k) -> int:
    """Sup-norm of an integer destabilizing subgroup read off the hull certificate."""
    cert = geo.hull_contains(_hull(d), shifted_theta(d, k))
    if cert.inside:
        return 0
    lam = geo.integerize(cert.covector)
    assert mundet_weight(d, k, lam) > 0
    return max(abs(a) for a in lam)


def _ray(d: GaugedMapDatum):
    return _hull(d), d.ws.theta, geo.scale(-1, d.dPv)


def large_k_semistable(d: GaugedMapDatum) -> LargeK:
    """Semistability for all sufficiently large ``k``.

    Along ``t = 1/k`` the tested point moves on the ray ``theta - t*dPv``;
    the answer is membership for every small ``t > 0``. ``threshold`` is the
    largest wall, beyond which the verdict no longer changes (0 if no wall).
    """
    ws_walls = walls(d.ws, d.support, d.dP).walls
    threshold = ws_walls[-1] if ws_walls else Fraction(0)
    return LargeK(_large_k_member(d), threshold)


def _large_k_member(d: GaugedMapDatum) -> bool:
    points, base, direction = _ray(d)
    if not any(direction):
        return geo.hull_contains(points, base).inside
    interval = geo.ray_interval(points, base, direction)
    return interval is not None and interval[0] == 0 and (interval[1] is None or interval[1] > 0)


def energy(d: GaugedMapDatum) -> Fraction:
    return geo.dot(d.ws.theta, d.dP) + d.du


def degree_slacks(d: GaugedMapDatum) -> dict:
    """``(mu_i, dPv) + du`` for each ``i`` in the support, i.e. ``deg div(u_i)``."""
    return {i: geo.dot(d.ws.weight(i), d.dP) + d.du for i in d.support}


def degree_feasible(d: GaugedMapDatum) -> bool:
    return all(s >= 0 for s in degree_slacks(d).values())


def walls(ws: WeightSystem, S: Support, dP: Sequence[int]) -> WallSet:
    """Values of ``k`` where the semistable verdict for ``(S, dP)`` changes."""
    S.check(ws)
    points = [ws.weight(i) for i in S]
    direction = geo.scale(-1, ws.metric.apply(tuple(int(a) for a in dP)))
    ts = geo.ray_boundary_crossings(points, ws.theta, direction)
    ks = tuple(sorted(1 / t for t in ts))
    degenerate = ()
    if ts and geo.affine_dimension(points) < ws.rank:
        degenerate = (S,)
    return WallSet(ks, degenerate)


def _feasibility_rows(ws, S, mode, k, E, floor):
    """Equality-form LP in (dP, du, coeffs, slacks, e_lo, e_hi)."""
    r = ws.rank
    s = len(S)
    nvars = r + 1 + s + s + 2
    A, b = [], []
    G = ws.metric.matrix
    weights = [ws.weight(i) for i in S]

    def row():
        return [Fraction(0)] * nvars

    coef0 = r + 1
    if mode == AT_K:
        # sum alpha_i mu_i + (1/k) G dP = theta ; sum alpha_i = 1
        for j in range(r):
            a = row()
            for c in range(r):
                a[c] = G[j][c] / k
            for i, w in enumerate(weights):
                a[coef0 + i] = w[j]
            A.append(a)
            b.append(ws.theta[j])
        a = row()
        for i in range(s):
            a[coef0 + i] = Fraction(1)
        A.append(a)
        b.append(Fraction(1))
    else:
        # -G dP in cone{mu_i - theta}: sum beta_i (mu_i - theta) + G dP = 0
        for j in range(r):
            a = row()
            for c in range(r):
                a[c] = G[j][c]
            for i, w in enumerate(weights):
                a[coef0 + i] = w[j] - ws.theta[j]
            A.append(a)
            b.append(Fraction(0))
    slack0 = coef0 + s
    for i, w in enumerate(weights):
        a = row()
        for c in range(r):
            a[c] = w[c]
        a[r] = Fraction(1)
        a[slack0 + i] = Fraction(-1)
        A.append(a)
        b.append(Fraction(0))
    e_lo, e_hi = nvars - 2, nvars - 1
    for target, col, sign in ((floor, e_lo, -1), (E, e_hi, 1)):
        a = row()
        for c in range(r):
            a[c] = ws.theta[c]
        a[r] = Fraction(1)
        a[col] = Fraction(sign)
        A.append(a)
        b.append(Fraction(target))
    free = [True] * (r + 1) + [False] * (nvars - r - 1)
    return A, b, free, nvars


def degree_box(ws: WeightSystem, S: Support, E, mode=LARGE_K, k=None, energy_floor=0):
    """Certified integer bounds ``[(lo, hi)]`` for ``dP_1..dP_r, du``; None if empty.

    Each bound is an exact LP optimum over the linear relaxation of the
    semistability, degree-feasibility and energy constraints.
    """
    E = geo.parse_rational(E)
    floor = geo.parse_rational(energy_floor)
    if mode == AT_K:
        k = _positive_k(k)
    elif mode != LARGE_K:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == LARGE_K and not geo.hull_contains([ws.weight(i) for i in S], ws.theta).inside:
        return None
    A, b, free, nvars = _feasibility_rows(ws, S, mode, k, E, floor)
    box = []
    for j in range(ws.rank + 1):
        bounds = []
        for sign in (1, -1):
            c = [0] * nvars
            c[j] = sign
            res = lp.solve(c, A, b, free)
            if res.status == lp.INFEASIBLE:
                return None
            if res.status == lp.UNBOUNDED:
                raise UnboundedFamily(
                    f"degree {'du' if j == ws.rank else f'dP[{j}]'} unbounded on support {S.indices}"
                )
            bounds.append(sign * res.value)
        lo, hi = bounds
        box.append((math.ceil(lo), math.floor(hi)))
    return box


def _check_enumeration_precondition(ws: WeightSystem):
    pos, dim = geo.hull_position(ws.weights, ws.theta)
    if pos is not Position.RELATIVE_INTERIOR or dim != ws.rank:
        raise UnboundedFamily(
            "enumeration needs theta in the interior of a full-dimensional weight hull "
            "(nonempty stable locus with stable = semistable)"
        )


def is_semistable(d: GaugedMapDatum, mode=LARGE_K, k=None) -> bool:
    if mode == AT_K:
        return geo.hull_contains(_hull(d), shifted_theta(d, k)).inside
    return _large_k_member(d)


def enumerate_bounded(
    ws: WeightSystem, E, mode=LARGE_K, k=None, energy_floor=0
) -> list[GaugedMapDatum]:
    """Every semistable, degree-feasible datum with energy in ``[energy_floor, E]``.

    The search box per support is certified by exact LP, so the list is
    complete. Output is sorted by (support, dP, du).
    """
    from .parallel import pmap

    E = geo.parse_rational(E)
    if E < 0:
        raise ValueError("energy budget must be nonnegative")
    _check_enumeration_precondition(ws)
    jobs = [(ws, S, E, mode, k, energy_floor) for S in ws.supports()]
    found = []
    for chunk in pmap(_enumerate_support, jobs):
        found.extend(chunk)
    return sorted(found, key=GaugedMapDatum.sort_key)


def _enumerate_support(job):
    ws, S, E, mode, k, floor = job
    box = degree_box(ws, S, E, mode, k, floor)
    if box is None:
        return []
    floor = geo.parse_rational(floor)
    out = []
    dP_ranges = [range(lo, hi + 1) for lo, hi in box[:-1]]
    du_lo, du_hi = box[-1]
    for dP in itertools.product(*dP_ranges):
        for du in range(du_lo, du_hi + 1):
            d = GaugedMapDatum(ws, dP, du, S)
            e = energy(d)
            if floor <= e <= E and degree_feasible(d) and is_semistable(d, mode, k):
                out.append(d)
    return out


def quot_dimension(d: GaugedMapDatum, genus: int) -> int:
    """Dimension of ``W^ss / G`` for the quot-scheme compactification.

    ``W`` is the sum over all weights of ``H^0`` of a line bundle of degree
    ``m_i = (mu_i, dPv) + du``; each needs ``m_i > 2g - 2`` so that
    ``h^0 = m_i - g + 1``. The torus rank is subtracted for the quotient.
    """
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    total = 0
    for i in range(1, d.ws.m + 1):
        m_i = geo.dot(d.ws.weight(i), d.dP) + d.du
        if m_i <= 2 * genus - 2:
            raise RiemannRochError(
                f"degree {m_i} of summand {i} is not above 2g-2 = {2 * genus - 2}"
            )
        h0 = m_i - genus + 1
        if h0.denominator != 1:
            raise ValueError(f"summand {i} has non-integral degree {m_i}")
        total += max(0, int(h0))
    return total - d.ws.rank
