"""Command-line front end.

    nclembed embed [--tstp] [--inline] <in> [<out>]
    nclembed check [--max-worlds N] [--max-domain N] [--faithfulness] <in>

Use ``-`` for standard input.  Include directives are resolved against the
input file's directory, then ``-I`` directories, then ``$TPTP``.  Failures
print ``error: <REASON_CODE>: <message>`` on standard error and exit 1.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .api import embed_problem, load_problem
from .errors import EmbeddingToolError, InputOutputError
from .oracle import Bounds, Countermodel, check_faithfulness, decide_bounded
from .syntax import print_problem

SZS_SUCCESS = "% SZS status Success"
SZS_START = "% SZS output start ListOfFormulae"
SZS_END = "% SZS output end ListOfFormulae"
SZS_ERROR = "% SZS status Error"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nclembed", description="Embed non-classical TPTP problems into classical THF.")
    sub = parser.add_subparsers(dest="command", required=True)

    embed = sub.add_parser("embed", help="translate a problem into classical THF")
    embed.add_argument("input")
    embed.add_argument("output", nargs="?")
    embed.add_argument("--tstp", action="store_true", help="wrap output in SZS status lines")
    embed.add_argument("--inline", action="store_true",
                       help="inline definitions and beta-normalize")
    embed.add_argument("-I", "--include-dir", action="append", default=[], dest="include_dirs")

    check = sub.add_parser("check", help="search for a countermodel within finite bounds")
    check.add_argument("input")
    check.add_argument("--max-worlds", type=int, default=3)
    check.add_argument("--max-domain", type=int, default=2)
    check.add_argument("--faithfulness", action="store_true",
                       help="also compare the embedding with direct semantics")
    check.add_argument("-I", "--include-dir", action="append", default=[], dest="include_dirs")
    return parser


def _search_paths(extra) -> list:
    paths = list(extra)
    root = os.environ.get("TPTP")
    if root:
        paths.append(root)
    return paths


def _read(path: str) -> tuple:
    try:
        if path == "-":
            return sys.stdin.read(), None
        return Path(path).read_text(encoding="utf-8"), path
    except OSError as exc:
        raise InputOutputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputOutputError(f"cannot write {path}: {exc.strerror}") from None


def run_embed(args) -> str:
    text, origin = _read(args.input)
    problem = load_problem(text, origin, _search_paths(args.include_dirs))
    out = print_problem(embed_problem(problem, inline=args.inline))
    if args.tstp:
        out = f"{SZS_SUCCESS}\n{SZS_START}\n{out}{SZS_END}\n"
    return out


def run_check(args) -> str:
    if args.max_worlds < 1 or args.max_domain < 1:
        raise EmbeddingToolError("bounds must be at least 1")
    text, origin = _read(args.input)
    problem = load_problem(text, origin, _search_paths(args.include_dirs))
    bounds = Bounds(max_worlds=args.max_worlds, max_domain=args.max_domain)
    verdict = decide_bounded(problem, bounds)
    lines = []
    if isinstance(verdict, Countermodel):
        lines.append("RESULT: Countermodel")
        lines.append(f"WORLD: {verdict.world}")
        lines.extend(verdict.model.describe().splitlines())
    else:
        lines.append("RESULT: NoCountermodelWithinBounds")
        lines.append(f"MODELS: {verdict.models_checked}")
    b = verdict.bounds
    lines.insert(1, f"BOUNDS: worlds <= {b.max_worlds}, domain <= {b.max_domain}")
    if args.faithfulness:
        report = check_faithfulness(problem, embed_problem(problem), bounds)
        if report.ok:
            lines.append(f"FAITHFULNESS: ok ({report.models} models)")
        else:
            lines.append(f"FAITHFULNESS: {len(report.disagreements)} disagreement(s), "
                         f"{len(report.axiom_violations)} axiom violation(s)")
            for d in report.disagreements[:5]:
                lines.append(f"  {d.formula} at world {d.world}: direct={d.direct} "
                             f"embedded={d.embedded}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    tstp = getattr(args, "tstp", False)
    try:
        out = run_embed(args) if args.command == "embed" else run_check(args)
    except EmbeddingToolError as exc:
        message = " ".join(str(exc).split())
        print(f"error: {exc.reason}: {message}", file=sys.stderr)
        if tstp:
            sys.stdout.write(f"{SZS_ERROR}\n% REASON: {exc.reason}: {message}\n")
        return 1
    except RecursionError:
        print("error: ERROR: input nested too deeply", file=sys.stderr)
        if tstp:
            sys.stdout.write(f"{SZS_ERROR}\n% REASON: ERROR: input nested too deeply\n")
        return 1
    try:
        _write(getattr(args, "output", None), out)
    except InputOutputError as exc:
        print(f"error: {exc.reason}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
