"""JSON encodings shared by the CLI and the bundled example corpus.

Rationals are written as JSON integers when integral and as ``"p/q"``
strings otherwise; input accepts either form but never decimals. Output is
canonical: sorted keys, compact separators, reduced fractions.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from . import geometry as geo
from .git import Support, WeightSystem
from .mundet import GaugedMapDatum
from .scaled import AFFINE, PROJECTIVE, CombinatorialType, ValuationAssignment, Vertex


class InputError(ValueError):
    """Malformed or invariant-violating input; the message names the problem."""


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return geo.format_rational(Fraction(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, pretty: bool = False) -> str:
    data = to_jsonable(obj)
    if pretty:
        return json.dumps(data, sort_keys=True, indent=2)
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _require(obj: dict, key: str, what: str):
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be a JSON object")
    if key not in obj:
        raise InputError(f"{what} is missing required field {key!r}")
    return obj[key]


def _rational(value, where: str) -> Fraction:
    try:
        return geo.parse_rational(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _rational_list(values, where: str) -> tuple:
    if not isinstance(values, list):
        raise InputError(f"{where} must be an array")
    return tuple(_rational(v, f"{where}[{j}]") for j, v in enumerate(values))


def _integer(value, where: str) -> int:
    q = _rational(value, where)
    if q.denominator != 1:
        raise InputError(f"{where} must be an integer, got {geo.format_rational(q)}")
    return int(q)


# -- weight systems and supports ---------------------------------------------


def ws_from_json(obj: dict) -> WeightSystem:
    rank = _integer(_require(obj, "rank", "weight system"), "rank")
    weights = _require(obj, "weights", "weight system")
    if not isinstance(weights, list) or not weights:
        raise InputError("weights must be a nonempty array of vectors")
    mus = [_rational_list(w, f"weights[{j}]") for j, w in enumerate(weights)]
    theta = _rational_list(_require(obj, "theta", "weight system"), "theta")
    metric = None
    if obj.get("metric") is not None:
        rows = obj["metric"]
        if not isinstance(rows, list):
            raise InputError("metric must be a square array")
        try:
            metric = geo.InnerProduct(tuple(_rational_list(r, "metric row") for r in rows))
        except ValueError as exc:
            raise InputError(f"metric: {exc}") from None
    try:
        return WeightSystem(rank, tuple(mus), theta, metric)
    except ValueError as exc:
        raise InputError(f"weight system: {exc}") from None


def ws_to_json(ws: WeightSystem) -> dict:
    out = {"rank": ws.rank, "weights": [list(w) for w in ws.weights], "theta": list(ws.theta)}
    if not ws.metric.is_identity():
        out["metric"] = [list(r) for r in ws.metric.matrix]
    return out


def support_from_json(values, ws: WeightSystem) -> Support:
    if not isinstance(values, list) or not values:
        raise InputError("support must be a nonempty array of 1-based indices")
    try:
        return Support(tuple(_integer(v, "support entry") for v in values)).check(ws)
    except ValueError as exc:
        raise InputError(f"support: {exc}") from None


# -- gauged map data ---------------------------------------------------------


def datum_from_json(obj: dict) -> GaugedMapDatum:
    ws = ws_from_json(_require(obj, "weight_system", "datum"))
    S = support_from_json(_require(obj, "support", "datum"), ws)
    dP = _rational_list(_require(obj, "dP", "datum"), "dP")
    du = _integer(obj.get("du", 0), "du")
    try:
        return GaugedMapDatum(ws, dP, du, S)
    except ValueError as exc:
        raise InputError(f"datum: {exc}") from None


def datum_to_json(d: GaugedMapDatum) -> dict:
    return {
        "weight_system": ws_to_json(d.ws),
        "support": list(d.support.indices),
        "dP": list(d.dP),
        "du": d.du,
    }


# -- scaled curve types ------------------------------------------------------


def type_from_json(obj: dict) -> CombinatorialType:
    mode = _require(obj, "mode", "type")
    if mode not in (PROJECTIVE, AFFINE):
        raise InputError(f"mode must be 'projective' or 'affine', got {mode!r}")
    raw = _require(obj, "vertices", "type")
    if not isinstance(raw, list):
        raise InputError("vertices must be an array")
    vertices = []
    for j, v in enumerate(raw):
        vid = _require(v, "id", f"vertices[{j}]")
        cls = _require(v, "class", f"vertices[{j}]")
        vertices.append(Vertex(str(vid), str(cls), None if v.get("parent") is None else str(v["parent"])))
    marks = obj.get("markings", {})
    if not isinstance(marks, dict):
        raise InputError("markings must map labels to vertex ids")
    markings = tuple((_integer(k, "marking label"), str(v)) for k, v in marks.items())
    T = CombinatorialType(mode, tuple(vertices), markings)
    if mode == AFFINE:
        z0 = _require(obj, "z0", "affine type")
        roots = [v.id for v in vertices if v.parent is None]
        if roots and str(z0) != roots[0]:
            raise InputError(f"z0 must sit on the distinguished vertex {roots[0]}, got {z0}")
    return T


def type_to_json(T: CombinatorialType) -> dict:
    vertices = []
    for v in T.vertices:
        entry = {"id": v.id, "class": v.cls}
        if v.parent is not None:
            entry["parent"] = v.parent
        vertices.append(entry)
    out = {
        "mode": T.mode,
        "vertices": vertices,
        "markings": {str(a): vid for a, vid in T.markings},
    }
    if T.mode == AFFINE:
        out["z0"] = T.root.id
    return out


def valuations_from_json(obj: dict) -> ValuationAssignment:
    edges = _require(obj, "edges", "valuations")
    if not isinstance(edges, dict):
        raise InputError("valuation edges must map child ids to rationals")
    delta = _rational(_require(obj, "delta", "valuations"), "delta")
    parsed = {str(e): _rational(v, f"edges[{e}]") for e, v in edges.items()}
    try:
        return ValuationAssignment(parsed, delta)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def shape_from_json(obj: dict) -> dict:
    """Parent map of a bare tree shape ``{"vertices": [{"id", "parent"?}, ...]}``."""
    raw = _require(obj, "vertices", "tree shape")
    if not isinstance(raw, list) or not raw:
        raise InputError("tree shape needs a nonempty vertex array")
    parents = {}
    for j, v in enumerate(raw):
        vid = str(_require(v, "id", f"vertices[{j}]"))
        if vid in parents:
            raise InputError(f"duplicate vertex id {vid}")
        parents[vid] = None if v.get("parent") is None else str(v["parent"])
    for vid, p in parents.items():
        if p is not None and p not in parents:
            raise InputError(f"vertex {vid}: unknown parent {p}")
    if sum(p is None for p in parents.values()) != 1:
        raise InputError("tree shape needs exactly one root")
    for vid in parents:
        seen, cur = set(), vid
        while cur is not None:
            if cur in seen:
                raise InputError(f"vertex {vid}: parent relation has a cycle")
            seen.add(cur)
            cur = parents[cur]
    return parents
