"""Command-line front end: ``tightpack verify|barlow|export|profile``.

Exit status is 0 when every check passes, 1 when any check fails and 2 for
usage or domain errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import barlow, checks, geometry, kepler_blocks as kb, minimal_blocks as mb
from .errors import GeometryDomainError, SolverError

GROUPS = ["oracle", "profiles", "honeycomb", "table1", "thirteen", "blocks", "minblocks", "barlow"]


def _shapes():
    shapes = {
        "rhombic": kb.build_rhombic_dodecahedron,
        "trapezo-rhombic": kb.build_trapezo_rhombic_dodecahedron,
    }
    for kind in mb.KINDS:
        shapes[kind] = lambda kind=kind: mb.minimal_block(kind).polyhedron
    return shapes


SHAPES = _shapes()


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=1e-8, help="numeric tolerance (default 1e-8)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    p.add_argument("--samples", type=int, default=10**6,
                   help="Monte Carlo samples per triangle (default 1e6)")
    p.add_argument("--format", choices=["md", "csv", "json"], default="md")
    p.add_argument("--timing", action="store_true", help="include per-check runtime in the report")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="tightpack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", choices=["all"] + GROUPS)

    b = sub.add_parser("barlow", parents=[common], help="check one stacking sequence")
    b.add_argument("--sequence", required=True)
    b.add_argument("--nx", type=int, default=1)
    b.add_argument("--ny", type=int, default=1)
    b.add_argument("--centers", metavar="PATH", help="also write sphere centres, one per line")

    e = sub.add_parser("export", parents=[common], help="write a block as an OFF mesh")
    e.add_argument("--shape", required=True, choices=sorted(SHAPES))
    e.add_argument("--out", required=True)

    pr = sub.add_parser("profile", parents=[common], help="tabulate a pyramid profile")
    pr.add_argument("--lemma", type=int, choices=[1, 2], required=True,
                    help="1 = right-corner profile, 2 = split-corner profile")
    pr.add_argument("--theta", type=float, required=True)
    pr.add_argument("--h", type=float, default=1 / math.sqrt(3))
    pr.add_argument("--grid", type=int, default=50)
    pr.add_argument("--xmax", type=float, default=5.0, help="largest x for the right-corner profile (default 5)")
    return parser


def _profile_rows(args):
    rows = []
    if args.lemma == 1:
        for i in range(1, args.grid + 1):
            x = args.xmax * i / args.grid
            p = geometry.right_corner_profile(args.theta, x)
            rows.append({"x": x, **p._asdict()})
        etas = [r["eta"] for r in rows]
        ok = bool(np.all(np.diff(etas) < 0))
        verdict = checks.exact("profile.right_corner_decreasing", "eta strictly decreasing on the grid", ok, True)
    else:
        for i in range(1, args.grid + 1):
            x = args.theta * i / (args.grid + 1)
            try:
                p = geometry.split_corner_profile(args.theta, args.h, x)
            except GeometryDomainError:
                continue
            rows.append({"x": x, **p._asdict()})
        if not rows:
            raise GeometryDomainError("no valid grid points for this theta")
        best = max(rows, key=lambda r: r["eta"])
        spacing = args.theta / (args.grid + 1)
        verdict = checks.numeric("profile.split_corner_argmax", "eta is largest at x = theta/2 (grid spacing)",
                                 best["x"], args.theta / 2, spacing)
    return rows, verdict


def _render_rows(rows, fmt_name):
    if fmt_name == "json":
        return "".join(json.dumps(r) + "\n" for r in rows)
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue() + "\n"
    head = list(rows[0])
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    lines += ["| " + " | ".join(checks.fmt(r[k]) for k in head) + " |" for r in rows]
    return "\n".join(lines) + "\n\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    opt = checks.Options(tol=args.tol, seed=args.seed, samples=args.samples)
    out = sys.stdout
    try:
        if args.command == "verify":
            names = GROUPS if args.suite == "all" else [args.suite]
            results = checks.run(names, opt)
        elif args.command == "barlow":
            seq = barlow.StackingSequence(args.sequence)
            if args.nx < 1 or args.ny < 1:
                raise GeometryDomainError("--nx and --ny must be at least 1")
            results = checks.run_suite(
                lambda o: checks.suite_barlow(o, [seq.letters], args.nx, args.ny), opt)
            if args.centers:
                region = barlow.generate_packing(seq, args.nx, args.ny)
                with open(args.centers, "w") as fh:
                    fh.write(barlow.centers_text(region))
        elif args.command == "export":
            poly = SHAPES[args.shape]()
            poly.write_off(args.out)
            results = [checks.exact("export.closed", f"{args.shape}: closed mesh written to {args.out}",
                                    poly.is_closed() and poly.euler_characteristic == 2, True)]
        else:
            rows, verdict = _profile_rows(args)
            out.write(_render_rows(rows, args.format))
            results = [verdict]
    except (GeometryDomainError, SolverError) as exc:
        print(f"tightpack: error: {exc}", file=sys.stderr)
        return 2
    out.write(checks.render(results, args.format, args.timing))
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
