"""Command-line entry point: ``nullcycles <command> ...``.

Exit codes: 0 success, 1 a verdict contradicted ``--expect`` (or an
experiment recorded failures), 2 usage or input error, 3 numeric failure.
Data goes to standard output or ``--out``; when standard output carries data
the one-line summary goes to standard error instead.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import examples as ex
from .chains import SimplicialChain, pushforward
from .core import EPS, GeometryError, Hyperplane, NumericFailure, chart_map, project_map
from .export import render_svg, write_atomic
from .nullproj import (WindingField, null_directions_sweep, planar_faces, project_to_chart, projects_to_zero)
from .ovaloid import body_from_json, equator, involution
from .verify import EXPERIMENTS, run_experiment


class UsageError(Exception):
    pass


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    if source.lstrip().startswith("{"):
        return source
    return Path(source).read_text()


def load_chain(source: str) -> SimplicialChain:
    data = json.loads(_read_text(source))
    if "chain" in data and "cells" not in data:
        data = data["chain"]
    return SimplicialChain.from_json(data)


def load_body(source: str):
    data = json.loads(_read_text(source))
    if "carrier" in data:
        data = data["carrier"]
    return body_from_json(data)


def parse_point(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError as err:
        raise UsageError(f"bad point {text!r}: {err}") from None


def parse_planes(source: str, d: int | None) -> list[Hyperplane]:
    if source in ("coordinate", "coords"):
        if d is None:
            raise UsageError("the coordinate preset needs a chain dimension")
        return [Hyperplane.coordinate(d, i) for i in range(d)]
    text = _read_text(source) if source == "-" or Path(source).exists() else source
    stripped = text.strip()
    if stripped.startswith("["):
        items = json.loads(stripped)
        return [Hyperplane.from_json(p) if isinstance(p, dict) else Hyperplane.parse(p) for p in items]
    parts = [p for chunk in stripped.splitlines() for p in chunk.split(";")]
    return [Hyperplane.parse(p) for p in parts if p.strip() and not p.strip().startswith("#")]


def _emit(args, payload: str, summary: str) -> None:
    out = getattr(args, "out", None)
    if out:
        write_atomic(out, payload)
        print(summary)
    else:
        sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")
        print(summary, file=sys.stderr)


def _verdict_line(P: Hyperplane, v) -> str:
    line = f"{v.status} plane={P} method={v.method} samples={v.samples_used}"
    if v.witness is not None:
        w = v.to_json()["witness"]
        if "winding" in w:
            line += f" witness_point={w.get('point')} winding={w['winding']}"
        elif "cell" in w:
            line += f" witness_cell={w['cell']['vertices']}"
    return line


# ------------------------------------------------------------ commands

def cmd_example(args) -> int:
    params = {}
    for item in args.param or []:
        k, sep, v = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects k=v, got {item!r}")
        params[k.strip()] = v.strip()
    try:
        bundle = ex.build(args.name, **params)
    except KeyError as err:
        raise UsageError(str(err.args[0])) from None
    _emit(args, json.dumps(bundle.to_json()),
          f"example {bundle.name}: {len(bundle.chain.cells)} cells, {len(bundle.claims)} claims")
    return 0


def cmd_gallery(args) -> int:
    print(json.dumps(ex.manifest(), indent=2))
    return 0


def cmd_project(args) -> int:
    T = load_chain(args.chain)
    P = Hyperplane.parse(args.plane)
    if args.exact:
        T = T.to_exact()
    if args.ambient:
        if not T.exact and P.exact:
            P = P.to_float()
        S = pushforward(T, project_map(P))
    else:
        S = project_to_chart(T, P)
    _emit(args, json.dumps(S.to_json()), f"projected {len(T.cells)} cells to {len(S.cells)} cells")
    return 0


def cmd_check_zero(args) -> int:
    T = load_chain(args.chain)
    P = Hyperplane.parse(args.plane)
    v = projects_to_zero(T, P, budget=args.budget, rng_seed=args.seed, exact=args.exact)
    if args.json:
        print(json.dumps(v.to_json()))
    else:
        print(_verdict_line(P, v))
    if args.expect == "zero" and not v.is_zero:
        return 1
    if args.expect == "nonzero" and v.is_zero:
        return 1
    return 0


def cmd_sweep(args) -> int:
    T = load_chain(args.chain)
    planes = parse_planes(args.planes, T.ambient_dim)
    res = null_directions_sweep(T, planes, budget=args.budget, rng_seed=args.seed, exact=args.exact)
    if args.out:
        write_atomic(args.out, json.dumps(res.to_json(), indent=2))
    for P, v in res.entries:
        print(_verdict_line(P, v))
    print(f"max independent zero normals: {res.max_independent_zero}")
    return 0


def cmd_involution(args) -> int:
    B = load_body(args.body)
    P = Hyperplane.parse(args.plane)
    x = parse_point(args.point)
    y = involution(B, P, x)
    print(",".join(repr(float(c)) for c in y))
    return 0


def cmd_equator(args) -> int:
    B = load_body(args.body)
    P = Hyperplane.parse(args.plane)
    comp = parse_point(args.companion) if args.companion else None
    T = equator(B, P, args.resolution, companion=comp)
    _emit(args, json.dumps(T.to_json()), f"equator: {len(T.cells)} cells in R^{T.ambient_dim}")
    return 0


def cmd_verify(args) -> int:
    kw = {}
    if args.n is not None:
        if args.experiment == "thm_main":
            kw["n"] = args.n
        elif args.experiment == "thm_tech":
            kw["n"] = args.n
    if args.failures_dir and args.experiment == "thm_main":
        kw["out_dir"] = args.failures_dir
    rep = run_experiment(args.experiment, args.seed, args.trials, **kw)
    text = rep.dumps()
    if args.out:
        write_atomic(args.out, text)
    status = "PASS" if rep.passed else "FAIL"
    print(f"{rep.experiment} seed={rep.seed} trials={rep.trials} failures={len(rep.failures)} {status}")
    return 0 if rep.passed else 1


def cmd_render(args) -> int:
    T = load_chain(args.chain)
    if args.plane:
        S = project_to_chart(T.to_exact(), Hyperplane.parse(args.plane))
    else:
        S = T
    if S.ambient_dim != 2 or S.dim != 1:
        raise UsageError("render needs a 1-cycle that lands in the plane (pass --plane for R^3 input)")
    S = S if S.exact else S.to_exact()
    faces = planar_faces(S) if S.cells else []
    write_atomic(args.svg, render_svg(S, faces, title=args.plane or ""))
    if args.csv:
        field = WindingField(S, [(f.sample, f.winding) for f in faces])
        write_atomic(args.csv, field.to_csv())
    nz = sum(1 for f in faces if f.winding != 0)
    print(f"rendered {len(faces)} faces ({nz} with nonzero winding) to {args.svg}")
    return 0


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nullcycles",
        description="Null projections of simplicial cycles, ovaloid involutions and experiments. "
                    f"Float tolerance is {EPS:g} (override with the NULLCYCLES_EPS environment variable).",
    )
    sub = p.add_subparsers(dest="command", required=True)
    plane_help = 'hyperplane "u1,...,ud[:level]", the set x.u = level; rationals like 1/3 stay exact'

    s = sub.add_parser("example", help="build a named example bundle (chain + claims) as JSON")
    s.add_argument("name", help=f"one of: {', '.join(ex.GALLERY)}")
    s.add_argument("--param", action="append", metavar="K=V", help="generator parameter, repeatable")
    s.add_argument("--out", help="write JSON here instead of standard output")
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("gallery", help="list the example generators and their defaults")
    s.set_defaults(func=cmd_gallery)

    s = sub.add_parser("project", help="push a chain forward to a hyperplane")
    s.add_argument("chain", help="chain or bundle JSON file, or - for standard input")
    s.add_argument("--plane", required=True, help=plane_help)
    s.add_argument("--exact", action="store_true", help="convert float coordinates to exact rationals first")
    s.add_argument("--ambient", action="store_true", help="keep ambient coordinates instead of plane coordinates")
    s.add_argument("--out")
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("check-zero", help="decide whether a cycle projects to zero on a hyperplane")
    s.add_argument("chain", nargs="?", default="-", help="chain or bundle JSON file, or - (default) for standard input")
    s.add_argument("--plane", required=True, help=plane_help)
    s.add_argument("--budget", type=int, default=256, help="sample points for the randomized test")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--exact", action="store_true", help="run the exact pipeline on float input")
    s.add_argument("--expect", choices=["zero", "nonzero"], help="exit 1 if the verdict disagrees")
    s.add_argument("--json", action="store_true", help="print the verdict as JSON")
    s.set_defaults(func=cmd_check_zero)

    s = sub.add_parser("sweep", help="check-zero over a list of hyperplanes")
    s.add_argument("chain", help="chain or bundle JSON file, or -")
    s.add_argument("--planes", required=True,
                   help='"coordinate", a file with one plane per line or a JSON list, or planes separated by ";"')
    s.add_argument("--budget", type=int, default=256)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--exact", action="store_true")
    s.add_argument("--out", help="write the sweep as JSON")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("involution", help="swap a boundary point to the other end of its chord")
    s.add_argument("body", help="body JSON file or inline JSON")
    s.add_argument("--plane", required=True, help=plane_help)
    s.add_argument("--point", required=True, help="comma-separated boundary point")
    s.set_defaults(func=cmd_involution)

    s = sub.add_parser("equator", help="discretized equator of an ellipsoid as a chain")
    s.add_argument("body", help="body JSON file or inline JSON")
    s.add_argument("--plane", required=True, help=plane_help)
    s.add_argument("--resolution", type=int, default=32,
                   help="polygon size in R^3, subdivision level in higher dimensions")
    s.add_argument("--companion", help="direction in the equator slice to align the mesh with")
    s.add_argument("--out")
    s.set_defaults(func=cmd_equator)

    s = sub.add_parser("verify", help="run a seeded experiment and write a JSON report")
    s.add_argument("experiment", choices=sorted(EXPERIMENTS))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, help="trials (thm_main), configurations (thm_tech) or ellipsoids (prop_or)")
    s.add_argument("--n", type=int, help="sphere dimension for thm_main / thm_tech")
    s.add_argument("--out", help="report path")
    s.add_argument("--failures-dir", help="directory for failure bundles")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("render", help="SVG of a planar projected cycle with face winding labels")
    s.add_argument("chain", help="chain or bundle JSON file, or -")
    s.add_argument("--plane", help="project onto this plane first (needed for R^3 input)")
    s.add_argument("--svg", required=True, help="output SVG path")
    s.add_argument("--csv", help="also write face sample points and windings as CSV")
    s.set_defaults(func=cmd_render)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code) if isinstance(err.code, int) else 2
    try:
        return args.func(args)
    except (NumericFailure, ArithmeticError, np.linalg.LinAlgError) as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return 3
    except (UsageError, GeometryError, ValueError, KeyError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
