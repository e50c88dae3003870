"""``continua`` command line: construct, verify, probe, render.

Exit codes: 0 success, 1 a checked contract failed, 2 usage or schema error.
Without ``-o`` output goes to ``$CONTINUA_OUT/<default name>`` when that
variable is set and to stdout otherwise.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import serialize as ser
from .cantor import PartitionError, mesh, refines, respects
from .comb import figure1_model, remark13_build
from .dendroid import DendroidApprox
from .fans import cantor_fan_profile, fan_geometry, lelek_profile
from .partition import InvalidRequest, null_partition, random_request, witness_problems
from .probes import (degree_growth, degree_stats, delta_quasicomponents, endpoint_height_usc_check,
                     radially_convex_check)
from .quotient import (InvalidDecomposition, UndecidableThreshold, example20_build,
                       gehman_decomposition, quotient_tree, usc_decomposition_check)
from .raster import ProbeError, accessibility_probe
from .rational import fmt, parse, parse_point
from .separation import HypothesisViolation, ResolutionFailure, separation_curve
from .svg import render_svg

OUT_ENV = "CONTINUA_OUT"
MAX_DEPTH = 16
MAX_RESOLUTION = 4096


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(text: str) -> Fraction:
    q = _rational(text)
    if q <= 0:
        raise argparse.ArgumentTypeError(f"{text} must be positive")
    return q


def _bounded(name: str, value: int | None, limit: int) -> None:
    if value is not None and not 0 <= value <= limit:
        raise UsageError(f"--{name} {value} outside [0, {limit}]")


# -- construct ---------------------------------------------------------------


DEFAULTS = {"remark13": {"depth": 13, "fans": 9}, "example20": {"depth": 12, "stage": 5}}


def _construct(args) -> dict:
    kind = args.kind
    for k, v in {"depth": 4, "stage": 3, "fans": 9, **DEFAULTS.get(kind, {})}.items():
        if getattr(args, k) is None:
            setattr(args, k, v)
    _check_bounds(args)
    if kind == "cantor-fan":
        return fan_geometry(cantor_fan_profile(args.depth)).to_json()
    if kind == "lelek-fan":
        return fan_geometry(lelek_profile(args.depth)).to_json()
    if kind == "profile":
        return ser.profile_doc(lelek_profile(args.depth))
    if kind == "gehman":
        return gehman_decomposition(args.stage).to_json()
    if kind == "example20":
        return example20_build(args.stage, lelek_profile(args.depth)).to_json()
    if kind == "figure1":
        return figure1_model(args.arcs or 20).to_json()
    if kind == "remark13":
        return remark13_build(args.fans, args.depth, args.arcs).to_json()
    if kind == "partition":
        req = random_request(random.Random(args.seed))
        if args.epsilon is not None:
            req = type(req)(req.base, req.marked, args.epsilon)
        return ser.partition_doc(null_partition(req), req, args.seed)
    if kind == "quotient":
        return quotient_tree(ser.load_decomposition(_input(args))).to_json()
    raise UsageError(f"unknown model kind {kind!r}")


# -- verify ------------------------------------------------------------------


def _verify_partition(doc: dict) -> dict:
    p, req = ser.load_partition(doc)
    problems = p.problems()
    report: dict = {"type": "partition-report", "pieces": len(p), "problems": problems}
    if req is not None and not problems:
        checks = {
            "refines": refines(p, req.base),
            "respects": respects(p, req.marked),
            "mesh_below_epsilon": mesh(p) < req.epsilon,
            "null_witness": not witness_problems(p, req.epsilon),
        }
        report.update(checks=checks, mesh=fmt(mesh(p)), epsilon=fmt(req.epsilon))
        report["problems"] = witness_problems(p, req.epsilon)[:20]
        report["ok"] = all(checks.values())
    else:
        report["ok"] = not problems
        if not problems:
            report["mesh"] = fmt(mesh(p))
    return report


def _verify_dendroid(m: DendroidApprox) -> dict:
    tree = m.tree_problems()
    planar = m.planarity_problems() if not tree else []
    bad_marks = sorted(n for n in m.endpoints if n != m.initial and m.degree(n) != 1)
    return {"type": "dendroid-report", "nodes": len(m.nodes), "edges": len(m.edges),
            "tree_problems": tree, "planarity_problems": planar,
            "marked_not_leaves": bad_marks,
            "ok": not tree and not planar and not bad_marks}


def _verify_example20(doc: dict) -> dict:
    # rebuild from the stored profile and compare; stored checks alone are not trusted
    dec = ser.load_decomposition(ser._require(doc, "decomposition", dict))
    stages = ser._require(doc, "stages", list)
    rebuilt = example20_build(len(stages), dec.profile)
    again = rebuilt.to_json()
    same = ser.dumps(again) == ser.dumps(doc)
    return {"type": "example20-report", "stages": len(stages), "reproduced": same,
            "checks": {str(s.n): dict(sorted(s.checks.items())) for s in rebuilt.stages},
            "ok": same and rebuilt.ok}


def _verify(args) -> dict:
    doc = _input(args)
    what = args.what
    if what == "partition":
        return _verify_partition(doc)
    if what == "usc-decomposition":
        dec = ser.load_decomposition(doc if ser.doc_type(doc) == "decomposition"
                                     else ser._require(doc, "decomposition", dict))
        rep = usc_decomposition_check(dec, args.delta).to_json()
        return {"type": "usc-decomposition-report", **rep}
    if what == "example20":
        return _verify_example20(doc)
    m = ser.load_model(doc)
    if what == "dendroid":
        return _verify_dendroid(m)
    if what == "radial":
        return {"type": "radial-report", **radially_convex_check(m).to_json()}
    if what == "usc-heights":
        return {"type": "usc-heights-report", **endpoint_height_usc_check(m).to_json()}
    raise UsageError(f"unknown check {what!r}")


# -- probe -------------------------------------------------------------------


def _probe(args) -> dict:
    what = args.what
    if what == "degrees":
        models = {i: ser.load_model(ser.read_doc(p)) for i, p in enumerate(args.input)}
        rep: dict = {"type": "degree-report",
                     "models": {str(i): degree_stats(m).to_json() for i, m in models.items()}}
        if len(models) > 1:
            rep["growth"] = degree_growth(models)
        return rep
    m = ser.load_model(_input(args))
    if what == "access":
        _need(args, "target")
        return {"type": "access-report", **accessibility_probe(m, args.target, args.resolution).to_json()}
    if what == "separate":
        _need(args, "e", "x")
        curve = separation_curve(m, args.e, args.x, args.resolution)
        return {"type": "separation-report", **curve.to_json()}
    if what == "quasicomponents":
        _need(args, "delta")
        ids = sorted(m.endpoints)
        classes = delta_quasicomponents([m.nodes[n] for n in ids], args.delta)
        cls_of = {ids[i]: k for k, c in enumerate(classes) for i in c}
        pairs = args.pair or ([[m.initial, "e"]] if m.initial and "e" in m.nodes else [])
        for a, b in pairs:
            for n in (a, b):
                if n not in cls_of:
                    raise ProbeError(f"{n!r} is not a marked endpoint")
        rep = {"type": "quasicomponent-report", "delta": fmt(args.delta), "points": len(ids),
               "classes": len(classes), "largest_class": max(map(len, classes), default=0),
               "same_class": [{"pair": [a, b], "same": cls_of[a] == cls_of[b]} for a, b in pairs]}
        if args.full:
            rep["members"] = [[ids[i] for i in c] for c in classes]
        return rep
    raise UsageError(f"unknown probe {what!r}")


def _need(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join(f"--{n}" for n in missing))


# -- render ------------------------------------------------------------------


def _overlay(path: str | None) -> tuple[list, bool]:
    if not path:
        return [], False
    doc = ser.read_doc(path)
    if doc.get("loop"):
        return [[parse_point(q) for q in doc["loop"]]], True
    if doc.get("path"):
        return [[parse_point(q) for q in doc["path"]]], False
    return [], False


def _render(args) -> str:
    m = ser.load_model(_input(args))
    lines, closed = _overlay(args.overlay)
    return render_svg(m, lines, closed=closed, title=args.title or "")


# -- plumbing ----------------------------------------------------------------


def _input(args) -> dict:
    src = args.input[0] if isinstance(args.input, list) else args.input
    if src is None:
        raise UsageError("missing -i/--input")
    try:
        return ser.read_doc(src)
    except OSError as exc:
        raise UsageError(f"cannot read {src}: {exc.strerror}") from exc


def _default_name(args) -> str:
    sub = getattr(args, "kind", None) or getattr(args, "what", None) or "out"
    return f"{args.command}-{sub}." + ("svg" if args.command == "render" else "json")


def _emit(args, text: str) -> None:
    target = args.output
    if target is None and os.environ.get(OUT_ENV):
        target = str(Path(os.environ[OUT_ENV]) / _default_name(args))
    if target is None or target == "-":
        sys.stdout.write(text)
    else:
        ser.write_atomic(target, text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="continua", description="Finite models of plane dendroids.")
    ap.add_argument("--max-depth", type=int, default=MAX_DEPTH)
    ap.add_argument("--max-resolution", type=int, default=MAX_RESOLUTION)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_input: bool = True) -> None:
        p.add_argument("-o", "--output")
        if with_input:
            p.add_argument("-i", "--input")

    c = sub.add_parser("construct", help="build a model or decomposition")
    c.add_argument("kind", choices=["cantor-fan", "lelek-fan", "profile", "gehman", "example20",
                                    "figure1", "remark13", "partition", "quotient"])
    c.add_argument("--depth", type=int)
    c.add_argument("--stage", type=int)
    c.add_argument("--fans", type=int)
    c.add_argument("--arcs", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--epsilon", type=_positive)
    common(c)

    v = sub.add_parser("verify", help="check a stored object; exit 1 on a failed contract")
    v.add_argument("what", choices=["partition", "usc-decomposition", "dendroid", "example20",
                                    "radial", "usc-heights"])
    v.add_argument("--delta", type=_positive, default=Fraction(1, 9))
    common(v)

    p = sub.add_parser("probe", help="resolution-scoped probes on a model")
    p.add_argument("what", choices=["access", "separate", "quasicomponents", "degrees"])
    p.add_argument("-i", "--input", nargs="+")
    p.add_argument("-o", "--output")
    p.add_argument("--target")
    p.add_argument("--e")
    p.add_argument("--x")
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--delta", type=_positive)
    p.add_argument("--pair", nargs=2, action="append", metavar=("A", "B"))
    p.add_argument("--full", action="store_true", help="list class members")

    r = sub.add_parser("render", help="SVG drawing of a model")
    r.add_argument("--overlay", help="probe report with a path or loop to draw")
    r.add_argument("--title")
    common(r)
    return ap


def _check_bounds(args) -> None:
    _bounded("depth", getattr(args, "depth", None), args.max_depth)
    _bounded("stage", getattr(args, "stage", None), args.max_depth)
    res = getattr(args, "resolution", None)
    if res is not None and not 8 <= res <= args.max_resolution:
        raise UsageError(f"--resolution {res} outside [8, {args.max_resolution}]")


COMMANDS: dict[str, Callable] = {"construct": _construct, "verify": _verify, "probe": _probe}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_bounds(args)
        if args.command == "render":
            _emit(args, _render(args))
            return 0
        doc = COMMANDS[args.command](args)
        _emit(args, ser.dumps(doc))
        return 0 if doc.get("ok", True) else 1
    except ResolutionFailure as exc:
        _emit(args, ser.dumps({"type": "separation-report", "ok": False, "error": str(exc),
                                "resolution": exc.resolution}))
        return 1
    except (UsageError, ser.SchemaError, ProbeError, HypothesisViolation, UndecidableThreshold,
            InvalidRequest, InvalidDecomposition, PartitionError, ValueError) as exc:
        print(f"continua: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
