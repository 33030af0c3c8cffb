"""Command-line front end: JSON in, canonical JSON out.

Exit codes: 0 success, 1 input error (diagnostic on stderr), 2 infeasible or
unbounded problem.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Iterator, Optional, Sequence

from . import git, mundet, oracles, scaled
from . import geometry as geo
from .serialize import (
    InputError,
    datum_from_json,
    datum_to_json,
    dumps,
    shape_from_json,
    support_from_json,
    type_from_json,
    type_to_json,
    valuations_from_json,
    ws_from_json,
)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- input helpers -----------------------------------------------------------


def _read_text(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    if path.startswith("example:"):
        name = path.split(":", 1)[1]
        try:
            return resources.files("gitgauge.corpus").joinpath(f"{name}.json").read_text()
        except FileNotFoundError:
            raise InputError(f"no bundled example named {name!r}") from None
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _documents(args) -> Iterator[dict]:
    text = _read_text(args.input)
    lines = [ln for ln in text.splitlines() if ln.strip()] if args.stream else [text]
    for j, chunk in enumerate(lines):
        try:
            yield json.loads(chunk)
        except json.JSONDecodeError as exc:
            where = f"line {j + 1}: " if args.stream else ""
            raise InputError(f"{where}malformed JSON ({exc.msg})") from None


def _k(value: Optional[str]):
    if value is None:
        return None
    try:
        k = geo.parse_rational(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"--k: {exc}") from None
    if k <= 0:
        raise InputError("--k must be positive")
    return k


def _grid(value: Optional[str]) -> list:
    if not value:
        raise InputError("--grid is required, e.g. --grid 1/2,1,3/2")
    try:
        grid = [geo.parse_rational(s) for s in value.split(",")]
    except (TypeError, ValueError) as exc:
        raise InputError(f"--grid: {exc}") from None
    if grid != sorted(set(grid)) or grid[0] <= 0:
        raise InputError("--grid must be strictly increasing positive rationals")
    return grid


def _class_json(c) -> dict:
    return {"semistable": c.semistable, "polystable": c.polystable, "stable": c.stable}


# -- subcommands -------------------------------------------------------------


def cmd_classify(args, doc):
    ws = ws_from_json(doc)
    if "support" in doc:
        S = support_from_json(doc["support"], ws)
        out = _class_json(git.classify(ws, S))
        if args.diagnostics:
            out["span_reading_disagrees"] = git.span_reading_disagrees(ws, S)
            out["witness"] = git.separating_witness(ws, S)
        return out
    rows = []
    for S in ws.supports():
        row = _class_json(git.classify(ws, S))
        row["support"] = list(S.indices)
        rows.append(row)
    return rows


def cmd_kn(args, doc):
    ws = ws_from_json(doc)
    return [
        {
            "lambda": list(s.lam),
            "fixed": list(s.fixed_support_filter),
            "members": [list(S.indices) for S in s.members],
            "limits": [list(S.indices) for S in s.limit_supports],
        }
        for s in git.kn_partition(ws)
    ]


def cmd_mundet_classify(args, doc):
    d = datum_from_json(doc)
    if args.large_k:
        res = mundet.large_k_semistable(d)
        return {"semistable": res.semistable, "threshold": res.threshold}
    k = _k(args.k) or 1
    return _class_json(mundet.mundet_classify(d, k))


def cmd_mundet_walls(args, doc):
    d = datum_from_json(doc)
    res = mundet.walls(d.ws, d.support, d.dP)
    return {"walls": list(res.walls), "degenerate": bool(res.degenerate_supports)}


def cmd_mundet_enumerate(args, doc):
    ws = ws_from_json(doc)
    if args.E is None:
        raise InputError("--E (energy cap) is required")
    E = _integer_flag(args.E, "--E")
    if args.k is not None and args.large_k:
        raise InputError("--k and --large-k are exclusive")
    if args.k is not None:
        data = mundet.enumerate_bounded(ws, E, mundet.AT_K, _k(args.k))
    else:
        data = mundet.enumerate_bounded(ws, E, mundet.LARGE_K)
    out = []
    for d in data:
        entry = datum_to_json(d)
        entry["energy"] = mundet.energy(d)
        out.append(entry)
    return out


def cmd_mundet_quot_dim(args, doc):
    d = datum_from_json(doc)
    genus = _integer_flag(args.genus, "--genus")
    try:
        return {"dimension": mundet.quot_dimension(d, genus)}
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_scaled_enumerate(args, doc):
    n = _integer_flag(args.n, "--n")
    if n < 0:
        raise InputError("--n must be nonnegative")
    return [type_to_json(T) for T in scaled.enumerate_types(n, args.mode)]


def cmd_scaled_check(args, doc):
    T = type_from_json(doc)
    violations = scaled.validate_type(T)
    out = {"valid": not violations, "violations": violations}
    if not violations:
        stable, counts = scaled.is_stable_type(T)
        out["stable"] = stable
        out["special_points"] = counts
        out["balanced_rank"] = scaled.balanced_rank(T)
        if stable:
            out["dimension"] = scaled.stratum_dimension(T)
            out["codimension"] = scaled.stratum_codimension(T)
            out["canonical"] = scaled.canonical_form(T).decode()
    return out


def cmd_scaled_limit(args, doc):
    parents = shape_from_json(doc)
    if "valuations" not in doc:
        raise InputError("limit input is missing required field 'valuations'")
    val = valuations_from_json(doc["valuations"])
    try:
        classes = scaled.tropical_limit(parents, val)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return {"classes": classes, "weights": scaled.limit_weights(parents, val)}


def _verdict_json(v) -> dict:
    out = {"semistable": v.semistable}
    if v.witness is not None:
        out["witness"] = list(v.witness)
        out["weight"] = v.weight
    return out


def cmd_oracle_classify(args, doc):
    ws = ws_from_json(doc)
    S = support_from_json(doc.get("support", list(range(1, ws.m + 1))), ws)
    budget = oracles.OracleBudget(lattice_radius=_radius(args))
    return _verdict_json(oracles.brute_force_classify(ws, S, budget))


def cmd_oracle_mundet(args, doc):
    d = datum_from_json(doc)
    budget = oracles.OracleBudget(lattice_radius=_radius(args))
    return _verdict_json(oracles.brute_force_mundet(d, _k(args.k) or 1, budget))


def cmd_oracle_walls(args, doc):
    d = datum_from_json(doc)
    brackets = oracles.scan_walls(d.ws, d.support, d.dP, _grid(args.grid), _radius(args))
    return {"brackets": [list(b) for b in brackets]}


def cmd_oracle_trees(args, doc):
    n = _integer_flag(args.n, "--n")
    if not 0 <= n <= 4:
        raise InputError("--n must be between 0 and 4 for the tree oracle")
    cap = _integer_flag(args.cap, "--cap") if args.cap is not None else oracles.minimal_tree_cap(n, args.mode)
    try:
        rep = oracles.exhaustive_tree_check(n, cap, args.mode)
    except oracles.CapTooSmall as exc:
        raise InputError(str(exc)) from None
    return {
        "identical": rep.identical,
        "oracle_count": rep.oracle_count,
        "enumerated_count": rep.enumerated_count,
        "missing": list(rep.missing),
        "extra": list(rep.extra),
    }


def cmd_examples(args, doc):
    root = resources.files("gitgauge.corpus")
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def _integer_flag(value, flag: str) -> int:
    try:
        q = geo.parse_rational(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{flag}: {exc}") from None
    if q.denominator != 1:
        raise InputError(f"{flag} must be an integer")
    return int(q)


def _radius(args) -> int:
    r = _integer_flag(args.radius, "--radius")
    if r < 1:
        raise InputError("--radius must be at least 1")
    return r


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="JSON file, '-' for stdin, or example:NAME")
    common.add_argument("--pretty", action="store_true", help="indent the output")
    common.add_argument("--stream", action="store_true", help="one JSON object per line")

    parser = _Parser(prog="gitgauge", description="Exact GIT, Mundet and scaled-curve computations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="stability of a support")
    p.add_argument("--diagnostics", action="store_true")
    p.set_defaults(func=cmd_classify, needs_input=True)

    p = sub.add_parser("kn", parents=[common], help="Kirwan-Ness strata")
    p.set_defaults(func=cmd_kn, needs_input=True)

    p = sub.add_parser("mundet", help="gauged maps")
    msub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = msub.add_parser("classify", parents=[common])
    q.add_argument("--k")
    q.add_argument("--large-k", action="store_true")
    q.set_defaults(func=cmd_mundet_classify, needs_input=True)
    q = msub.add_parser("walls", parents=[common])
    q.set_defaults(func=cmd_mundet_walls, needs_input=True)
    q = msub.add_parser("enumerate", parents=[common])
    q.add_argument("--E")
    q.add_argument("--k")
    q.add_argument("--large-k", action="store_true")
    q.set_defaults(func=cmd_mundet_enumerate, needs_input=True)
    q = msub.add_parser("quot-dim", parents=[common])
    q.add_argument("--genus", default="0")
    q.set_defaults(func=cmd_mundet_quot_dim, needs_input=True)

    p = sub.add_parser("scaled", help="scaled curve types")
    ssub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = ssub.add_parser("enumerate", parents=[common])
    q.add_argument("--n", required=True)
    q.add_argument("--mode", choices=[scaled.PROJECTIVE, scaled.AFFINE], default=scaled.PROJECTIVE)
    q.set_defaults(func=cmd_scaled_enumerate, needs_input=False)
    q = ssub.add_parser("check", parents=[common])
    q.set_defaults(func=cmd_scaled_check, needs_input=True)
    q = ssub.add_parser("limit", parents=[common])
    q.set_defaults(func=cmd_scaled_limit, needs_input=True)

    p = sub.add_parser("oracle", help="brute-force cross-checks")
    osub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = osub.add_parser("classify", parents=[common])
    q.add_argument("--radius", default="4")
    q.set_defaults(func=cmd_oracle_classify, needs_input=True)
    q = osub.add_parser("mundet", parents=[common])
    q.add_argument("--radius", default="4")
    q.add_argument("--k")
    q.set_defaults(func=cmd_oracle_mundet, needs_input=True)
    q = osub.add_parser("walls", parents=[common])
    q.add_argument("--radius", default="4")
    q.add_argument("--grid")
    q.set_defaults(func=cmd_oracle_walls, needs_input=True)
    q = osub.add_parser("trees", parents=[common])
    q.add_argument("--n", required=True)
    q.add_argument("--cap")
    q.add_argument("--mode", choices=[scaled.PROJECTIVE, scaled.AFFINE], default=scaled.PROJECTIVE)
    q.set_defaults(func=cmd_oracle_trees, needs_input=False)

    p = sub.add_parser("examples", parents=[common], help="list bundled example inputs")
    p.set_defaults(func=cmd_examples, needs_input=False)
    return parser


def _emit(result, args, out) -> None:
    if args.stream and isinstance(result, list):
        for item in result:
            out.write(dumps(item) + "\n")
    else:
        out.write(dumps(result, args.pretty) + "\n")


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        docs = _documents(args) if args.needs_input else iter([None])
        for doc in docs:
            _emit(args.func(args, doc), args, out)
    except InputError as exc:
        err.write(f"gitgauge: input error: {exc}\n")
        return EXIT_INPUT
    except mundet.UnboundedFamily as exc:
        err.write(f"gitgauge: unbounded: {exc}\n")
        return EXIT_INFEASIBLE
    except (ValueError, KeyError) as exc:
        err.write(f"gitgauge: input error: {exc}\n")
        return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
