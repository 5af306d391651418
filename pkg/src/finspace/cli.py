"""Command line front end.

Subcommands: build, verify, aut, core, dot, oracle-aut.  All output is
canonical (sorted keys, stable ordering), so identical invocations give
byte-identical files.  Exit codes: 0 success, 1 a verification clause or
oracle comparison failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from .automorphisms import (automorphisms_naive, core, enumerate_automorphisms,
                            random_poset)
from .groups import GroupError, generators_from_spec, make_group, retraction_from_spec
from .poset import Poset, PosetError
from .realize import RealizationError, build_space, manifest
from .verify import verify_height0, verify_theorem


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_poset(path: str) -> Poset:
    return Poset.from_json(Path(path).read_text(encoding="utf-8")).require_valid()


def cmd_build(args) -> int:
    group = make_group(args.group)
    retraction = retraction_from_spec(group, args.retraction)
    gens = generators_from_spec(retraction, args.gens)
    space = build_space(retraction, gens)
    prefix = Path(args.out)
    poset_path = prefix.with_name(prefix.name + ".poset.json")
    manifest_path = prefix.with_name(prefix.name + ".manifest.json")
    poset_path.write_text(space.poset.to_json(), encoding="utf-8")
    manifest_path.write_text(
        json.dumps(manifest(space), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    print(f"points={space.cardinality} height={space.poset.height()} "
          f"connected={str(space.poset.is_connected()).lower()} m={space.gens.m}")
    print(f"wrote {poset_path} and {manifest_path}")
    return 0


def cmd_verify(args) -> int:
    if args.height0 is not None:
        report = verify_height0(args.height0)
    else:
        if not args.group:
            raise GroupError("verify needs --group GROUP or --height0 N")
        group = make_group(args.group)
        retraction = retraction_from_spec(group, args.retraction)
        gens = generators_from_spec(retraction, args.gens)
        report = verify_theorem(retraction, gens, iso_bound=args.iso_bound)
    if args.report_json:
        Path(args.report_json).write_text(report.to_json(), encoding="utf-8")
    if args.report_text:
        Path(args.report_text).write_text(report.to_text(), encoding="utf-8")
    sys.stdout.write(report.to_text())
    print(f"elapsed: {report.elapsed_seconds:.2f}s", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_aut(args) -> int:
    poset = _load_poset(args.poset)
    perms = enumerate_automorphisms(poset)
    _emit(json.dumps(perms.to_dict(), sort_keys=True, indent=2) + "\n", args.out)
    return 0


def cmd_core(args) -> int:
    poset = _load_poset(args.poset)
    minimal, trace = core(poset)
    payload = {"core": minimal.to_dict(),
               "trace": [[label, kind] for label, kind in trace]}
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def cmd_dot(args) -> int:
    poset = _load_poset(args.poset)
    _emit(poset.to_dot(), args.out)
    return 0


def cmd_oracle_aut(args) -> int:
    rng = random.Random(args.seed)
    t0 = time.monotonic()
    mismatches = []
    for i in range(args.count):
        poset = random_poset(rng, args.max_points)
        fast = enumerate_automorphisms(poset)
        slow = automorphisms_naive(poset)
        if fast != slow:
            mismatches.append((i, poset.to_dict()))
    elapsed = time.monotonic() - t0
    print(f"instances={args.count} max_points={args.max_points} seed={args.seed} "
          f"mismatches={len(mismatches)} elapsed={elapsed:.2f}s")
    for i, data in mismatches[:3]:
        print(f"mismatch at instance {i}: {json.dumps(data, sort_keys=True)}")
    return 0 if not mismatches else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finspace",
        description="Build finite height-1 spaces realizing finite groups and "
                    "group retractions, and verify their properties exhaustively.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a space and write poset + manifest files")
    p.add_argument("--group", required=True, help="e.g. cyclic:6, dihedral:4, "
                   "symmetric:3, product:cyclic:2,cyclic:2, table:FILE")
    p.add_argument("--retraction", default="identity",
                   help="identity | trivial | file:PATH (default identity)")
    p.add_argument("--gens", default="greedy",
                   help="greedy | all | explicit S1/S2 lists like 3/2 (default greedy)")
    p.add_argument("--out", default="space", help="output path prefix (default 'space')")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run the verification pipeline")
    p.add_argument("--group", help="group spec (see build)")
    p.add_argument("--retraction", default="identity")
    p.add_argument("--gens", default="greedy")
    p.add_argument("--height0", type=int, default=None, metavar="N",
                   help="verify the N-point antichain instead of a built space")
    p.add_argument("--iso-bound", type=int, default=16,
                   help="largest group order for the isomorphism-type clause")
    p.add_argument("--report-json", default=None, help="write the JSON report here")
    p.add_argument("--report-text", default=None, help="write the text report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("aut", help="enumerate the automorphisms of a poset file")
    p.add_argument("poset", help="poset JSON file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("core", help="iteratively remove beat points from a poset file")
    p.add_argument("poset", help="poset JSON file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("dot", help="emit a Graphviz rendering of a poset file")
    p.add_argument("poset", help="poset JSON file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("oracle-aut", help="compare the enumerator against the "
                       "brute-force oracle on random posets")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-points", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_aut)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GroupError, PosetError, RealizationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
