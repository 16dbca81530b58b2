"""Command line interface: check, solve, normalize, shape, corpus."""

from __future__ import annotations

import argparse
import os
import sys

from . import oracle, shapes, solver
from .corpus import ManifestDrift, verify_corpus
from .diagnostics import CheckError, use_color
from .loader import Workspace, check_files
from .parser import parse_sequent
from .printer import Printer, show_shape
from .syntax import IllFormedCubeTerm, IllFormedTope, TriContext

EXIT_OK, EXIT_DIAGNOSTICS, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stt", description="Checker for simplicial type theory with shapes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check .stt files and print diagnostics")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("solve", help='decide a tope sequent such as "x:2, y:2 | x<=y |- x===y"')
    p.add_argument("sequent")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against brute-force enumeration")

    p = sub.add_parser("normalize", help="print the normal form of a definition")
    p.add_argument("file")
    p.add_argument("--term", required=True)

    p = sub.add_parser("shape", help="print a shape")
    p.add_argument("kind", choices=["simplex", "boundary", "horn", "join"])
    p.add_argument("args", nargs="+", type=int)

    p = sub.add_parser("corpus", help="verify the corpus against its manifest")
    p.add_argument("--manifest", default=os.path.join("corpus", "manifest.json"))
    return ap


def cmd_check(args, out) -> int:
    diags = check_files(args.files)
    color = use_color(out)
    for d in diags:
        print(d.render(color), file=out)
    if any(d.code == "E0900" for d in diags):
        return EXIT_INTERNAL
    return EXIT_DIAGNOSTICS if diags else EXIT_OK


def cmd_solve(args, out) -> int:
    try:
        ctx, hyps, goal = parse_sequent(args.sequent)
        holds = solver.entails(ctx, hyps, goal)
    except CheckError as err:
        raise UsageError(str(err)) from None
    except (IllFormedTope, IllFormedCubeTerm) as exc:
        raise UsageError(str(exc)) from None
    print("yes" if holds else "no", file=out)
    if not holds:
        branch = solver.countermodel(ctx, hyps, goal)
        if branch is not None:
            print(f"countermodel: {solver.format_branch(branch)}", file=out)
    if args.oracle:
        expected = oracle.oracle_entails(ctx, hyps, goal)
        if expected != holds:
            print(f"oracle disagrees: enumeration says {'yes' if expected else 'no'}", file=out)
            return EXIT_INTERNAL
        print("oracle agrees", file=out)
    return EXIT_OK


def cmd_normalize(args, out) -> int:
    ws = Workspace()
    try:
        loaded = ws.load(args.file)
    except CheckError as err:
        print(err.diagnostic().render(use_color(out)), file=out)
        return EXIT_DIAGNOSTICS
    if loaded.diagnostics:
        for d in loaded.diagnostics:
            print(d.render(use_color(out)), file=out)
        return EXIT_DIAGNOSTICS
    entry = ws.env.get(args.term)
    if entry is None:
        raise UsageError(f"no definition named {args.term}")
    if entry.body is None:
        raise UsageError(f"{args.term} is a postulate and has no normal form")
    empty = TriContext()
    nf = ws.checker.normalize(empty, entry.body, entry.type)
    print(Printer().expr(nf), file=out)
    return EXIT_OK


def cmd_shape(args, out) -> int:
    n = args.args
    try:
        match args.kind, len(n):
            case "simplex", 1:
                s = shapes.simplex(n[0])
            case "boundary", 1:
                s = shapes.boundary(n[0])
            case "horn", 2:
                s = shapes.horn(n[0], n[1])
            case "join", 2:
                s = shapes.restrict(shapes.join(shapes.augmented_simplex(n[0]),
                                                shapes.augmented_simplex(n[1])))
            case _:
                want = {"simplex": "N", "boundary": "N", "horn": "N K", "join": "M N"}[args.kind]
                raise UsageError(f"usage: stt shape {args.kind} {want}")
    except (shapes.Overflow, shapes.OutOfRange, shapes.ArityMismatch) as exc:
        raise UsageError(str(exc)) from None
    print(show_shape(s), file=out)
    return EXIT_OK


def cmd_corpus(args, out) -> int:
    try:
        report = verify_corpus(args.manifest)
    except ManifestDrift as exc:
        print(f"manifest drift: {exc}", file=out)
        return EXIT_DIAGNOSTICS
    except OSError as exc:
        raise UsageError(f"cannot read manifest: {exc}") from None
    for line in report.lines():
        print(line, file=out)
    return EXIT_OK if report.ok else EXIT_DIAGNOSTICS


COMMANDS = {
    "check": cmd_check,
    "solve": cmd_solve,
    "normalize": cmd_normalize,
    "shape": cmd_shape,
    "corpus": cmd_corpus,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"stt: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else is a bug in the checker
        print(f"stt: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
