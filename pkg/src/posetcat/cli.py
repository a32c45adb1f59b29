"""Command-line entry point.

Subcommands: audit-idempotents, certify, enumerate, triangulate, kan, horn,
verify-all.  Machine output is JSON on stdout; diagnostics go to stderr.
Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
configuration error.  POSETCAT_THREADS caps enumeration workers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import catalog, checks, karoubi, presheaf
from .errors import PosetCatError
from .poset import chain, poset_from_json, poset_to_json

MAX_POSET_LIMIT = 5
MAX_DIM_LIMIT = 3
MAX_SIMPLEX_LIMIT = 4


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("POSETCAT_THREADS", "1")))
    except ValueError:
        return 1


def _emit(data) -> None:
    sys.stdout.write(json.dumps(data, indent=2) + "\n")


def _read_poset(path: str | None):
    raw = sys.stdin.read() if path in (None, "-") else open(path).read()
    return poset_from_json(json.loads(raw))


def _cmd_enumerate(args) -> int:
    workers = _workers()
    if args.kind == "maps":
        if not args.dom or not args.cod:
            print("enumerate --kind maps requires --dom and --cod", file=sys.stderr)
            return 2
        dom = _read_poset(args.dom)
        cod = _read_poset(args.cod)
        if args.format == "count":
            _emit({"count": catalog.count_monotone_maps(dom, cod, workers=workers)})
            return 0
        maps = list(catalog.enumerate_monotone_maps(dom, cod, workers=workers))
        _emit(
            {
                "dom": poset_to_json(dom),
                "cod": poset_to_json(cod),
                "count": len(maps),
                "items": [list(f.image) for f in maps],
            }
        )
        return 0
    enum = catalog.enumerate_posets if args.kind == "posets" else catalog.enumerate_lattices
    reps = enum(args.size)
    if args.format == "count":
        _emit({"count": len(reps)})
        return 0
    _emit(
        {
            "count": len(reps),
            "items": [poset_to_json(cp.poset) for cp in reps],
        }
    )
    return 0


def _cmd_audit_idempotents(args) -> int:
    report = karoubi.audit_cube_idempotents(
        args.dim, mode=args.mode, samples=args.samples, seed=args.seed
    )
    _emit(karoubi.audit_report_to_json(report, include_timing=args.timings))
    return 0 if report.passed else 1


def _cmd_certify(args) -> int:
    C = _read_poset(args.input)
    cert = karoubi.retract_certificate(C)
    _emit(
        {
            "lattice": poset_to_json(C),
            "cube_dim": cert.cube_dim,
            "section": list(cert.section.image),
            "retraction": list(cert.retraction.image),
        }
    )
    return 0


def _cmd_triangulate(args) -> int:
    X = presheaf.triangulate(args.cube_dim, args.trunc)
    if args.format == "count":
        _emit(list(X.cells))
    elif args.format == "human":
        for m, c in enumerate(X.cells):
            print(f"level [{m}]: {c} cells")
    else:
        _emit(presheaf.presheaf_to_json(X))
    return 0


def _cmd_kan(args) -> int:
    M = _read_poset(args.target)
    if args.presheaf:
        X = presheaf.presheaf_from_json(json.loads(open(args.presheaf).read()))
        result = presheaf.left_kan(X, M, args.trunc)
        _emit(
            {
                "target": poset_to_json(M),
                "truncation": result.depth,
                "components": result.count,
            }
        )
        return 0
    m = args.simplex
    X = presheaf.representable(presheaf.delta_site(m), chain(m))
    result = presheaf.left_kan(X, M, args.trunc)
    oracle = catalog.count_monotone_maps(M, chain(m))
    _emit(
        {
            "simplex": m,
            "target": poset_to_json(M),
            "truncation": result.depth,
            "components": result.count,
            "hom_oracle": oracle,
            "match": result.count == oracle,
        }
    )
    return 0 if result.count == oracle else 1


def _cmd_horn(args) -> int:
    I = [int(v) for v in args.faces.split(",") if v != ""]
    incl = presheaf.horn(args.dim, I, args.trunc)
    if args.format == "count":
        _emit(
            {
                "cells": list(incl.source.cells),
                "target_cells": list(incl.target.cells),
            }
        )
        return 0
    _emit(
        {
            "source": presheaf.presheaf_to_json(incl.source),
            "target": presheaf.presheaf_to_json(incl.target),
            "components": [list(c) for c in incl.components],
        }
    )
    return 0


def _cmd_verify_all(args) -> int:
    if not 1 <= args.max_poset <= MAX_POSET_LIMIT:
        print(f"--max-poset must be in 1..{MAX_POSET_LIMIT}", file=sys.stderr)
        return 2
    if not 0 <= args.max_dim <= MAX_DIM_LIMIT:
        print(f"--max-dim must be in 0..{MAX_DIM_LIMIT}", file=sys.stderr)
        return 2
    if not 1 <= args.max_simplex <= MAX_SIMPLEX_LIMIT:
        print(f"--max-simplex must be in 1..{MAX_SIMPLEX_LIMIT}", file=sys.stderr)
        return 2
    report = checks.verify_all(
        max_poset=args.max_poset,
        max_dim=args.max_dim,
        max_simplex=args.max_simplex,
        deep=args.deep,
        seed=args.seed,
    )
    if args.format == "human":
        for c in sorted(report.checks, key=lambda c: c.name):
            status = "pass" if c.passed else "FAIL"
            extra = f"  [{c.error}]" if c.error else ""
            print(f"{c.name:<24} {status}  {c.counts} ({c.elapsed:.2f}s){extra}")
        print(f"overall: {'pass' if report.passed else 'FAIL'}")
    else:
        _emit(checks.report_to_json(report, timings=args.timings))
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posetcat",
        description="Audits for idempotent splittings of cubes, lattice retract "
        "certificates, cube triangulations and their Kan extensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="posets/lattices up to iso, or monotone maps")
    p.add_argument("--kind", choices=["posets", "lattices", "maps"], required=True)
    p.add_argument("--size", type=int, default=0)
    p.add_argument("--dom", help="domain poset JSON file (maps)")
    p.add_argument("--cod", help="codomain poset JSON file (maps)")
    p.add_argument("--format", choices=["json", "count"], default="json")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("audit-idempotents", help="split every idempotent cube endomorphism")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=_cmd_audit_idempotents)

    p = sub.add_parser("certify", help="lattice-in-cube retract certificate")
    p.add_argument("--input", help="poset JSON file (default stdin)")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("triangulate", help="simplicial cell counts of a cube")
    p.add_argument("--cube-dim", type=int, required=True)
    p.add_argument("--trunc", type=int, required=True)
    p.add_argument("--format", choices=["json", "count", "human"], default="json")
    p.set_defaults(func=_cmd_triangulate)

    p = sub.add_parser("kan", help="pointwise left Kan extension value")
    p.add_argument("--simplex", type=int, default=1)
    p.add_argument("--presheaf", help="presheaf JSON file instead of a representable")
    p.add_argument("--target", help="poset JSON file for the evaluation point (default stdin)")
    p.add_argument("--trunc", type=int)
    p.set_defaults(func=_cmd_kan)

    p = sub.add_parser("horn", help="generalized horn inclusion")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--faces", required=True, help="comma-separated face indices (the union set)")
    p.add_argument("--trunc", type=int)
    p.add_argument("--format", choices=["json", "count"], default="json")
    p.set_defaults(func=_cmd_horn)

    p = sub.add_parser("verify-all", help="run the full audit suite")
    p.add_argument("--max-poset", type=int, default=5)
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--max-simplex", type=int, default=3)
    p.add_argument("--deep", action="store_true", help="include the exhaustive dim-3 audit")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "human"], default="json")
    p.add_argument("--timings", action="store_true", help="include elapsed times in JSON")
    p.set_defaults(func=_cmd_verify_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PosetCatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
