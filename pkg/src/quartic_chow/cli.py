"""Command-line entry point.

Exit codes: 0 every check passed, 1 a check or fixture failed, 2 usage error,
3 internal or resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .groebner import ResourceExhausted
from .pipeline.donaldson import NonIntegralError, donaldson_table
from .pipeline.fixtures import FixtureError, load_fixtures
from .pipeline.stages import MODES, STAGE_ORDER, Pipeline, StageError, StageReport

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
FORMATS = ("text", "json", "csv", "markdown")
RINGS = ("N", "P2", "Fl", "C3", "C4", "Q", "PV", "Mplus", "E", "M", "H3")


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(v):
        return argparse.SUPPRESS if suppress else v

    parser.add_argument("--mode", choices=MODES, default=default("verification"))
    parser.add_argument("--format", choices=FORMATS, default=default("text"))
    parser.add_argument("--threads", type=int, default=default(1))
    parser.add_argument("--budget", type=int, default=default(None),
                        help="cap on Groebner reduction steps")
    parser.add_argument("--fixtures", default=default(None), help="directory with replacement data files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quartic-chow", description=__doc__.splitlines()[0])
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run stages and compare with the reference data")
    p.add_argument("--stage", action="append", choices=STAGE_ORDER, help="restrict to a stage (repeatable)")
    _common(p, suppress=True)

    p = sub.add_parser("stage", help="run one stage (and its prerequisites) and report it")
    p.add_argument("name", choices=STAGE_ORDER)
    _common(p, suppress=True)

    p = sub.add_parser("donaldson", help="table of Euler characteristics")
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--mmax", type=int, default=20)
    p.add_argument("--check", action="store_true", help="compare with the reference table")
    _common(p, suppress=True)

    p = sub.add_parser("euler", help="one Euler characteristic chi((m-3k) alpha - k beta)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _common(p, suppress=True)

    p = sub.add_parser("export", help="print a ring in the exchange format")
    p.add_argument("ring")
    _common(p, suppress=True)
    return parser


# report rendering -----------------------------------------------------------

def render_reports(reports: list[StageReport], fmt: str) -> str:
    if fmt == "json":
        docs = [r.as_dict() for r in reports]
        return json.dumps(docs[0] if len(docs) == 1 else docs, indent=1)
    rows = [(r.stage, c) for r in reports for c in r.checks]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stage", "name", "expected", "computed", "pass"])
        for stage, c in rows:
            w.writerow([stage, c.name, c.expected, c.computed, "pass" if c.passed else "fail"])
        return buf.getvalue().rstrip("\n")
    if fmt == "markdown":
        lines = ["| stage | check | expected | computed | verdict |", "|---|---|---|---|---|"]
        for stage, c in rows:
            cells = [stage, c.name, c.expected, c.computed, "pass" if c.passed else "FAIL"]
            lines.append("| " + " | ".join(x.replace("|", "\\|") for x in cells) + " |")
        return "\n".join(lines)
    out = []
    for r in reports:
        out.append(f"{'PASS' if r.passed else 'FAIL'} stage {r.stage} ({len(r.checks)} checks)")
        for c in r.checks:
            if c.passed:
                out.append(f"  ok    {c.name}: {c.computed}")
            else:
                out.append(f"  FAIL  {c.name}: expected {c.expected}, computed {c.computed}")
        for n in r.notes:
            out.append(f"  note  {n}")
    return "\n".join(out)


def render_grid(cells: dict[tuple[int, int], int], ks: list[int], ms: list[int], fmt: str) -> str:
    def value(k, m):
        v = cells.get((k, m))
        return "" if v is None else str(v)

    if fmt == "json":
        doc = {"k": ks, "rows": [{"m": m, "values": {str(k): value(k, m) for k in ks if (k, m) in cells}} for m in ms]}
        return json.dumps(doc, indent=1)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m\\k"] + [str(k) for k in ks])
        for m in ms:
            w.writerow([str(m)] + [value(k, m) for k in ks])
        return buf.getvalue().rstrip("\n")
    if fmt == "markdown":
        lines = ["| m\\k | " + " | ".join(str(k) for k in ks) + " |", "|---" * (len(ks) + 1) + "|"]
        for m in ms:
            lines.append(f"| {m} | " + " | ".join(value(k, m) for k in ks) + " |")
        return "\n".join(lines)
    width = max([len(value(k, m)) for k in ks for m in ms] + [4])
    lines = ["m\\k".rjust(4) + "".join(str(k).rjust(width + 2) for k in ks)]
    for m in ms:
        lines.append(str(m).rjust(4) + "".join(value(k, m).rjust(width + 2) for k in ks))
    return "\n".join(lines)


# commands -------------------------------------------------------------------

def _pipeline(args) -> Pipeline:
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    if args.budget is not None and args.budget < 1:
        raise UsageError("--budget must be positive")
    return Pipeline(load_fixtures(args.fixtures), mode=args.mode, budget=args.budget, threads=args.threads)


def cmd_verify(args, out) -> int:
    pipe = _pipeline(args)
    names = args.stage or list(STAGE_ORDER)
    reports = []
    for name in STAGE_ORDER:
        if name in names:
            try:
                reports.append(pipe.run(name))
            except StageError as exc:
                print(render_reports(list(pipe.reports.values()), args.format), file=out)
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_MISMATCH
    print(render_reports(reports, args.format), file=out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH


def cmd_stage(args, out) -> int:
    pipe = _pipeline(args)
    try:
        report = pipe.run(args.name)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    print(render_reports([report], args.format), file=out)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_donaldson(args, out) -> int:
    if args.kmax < 1 or args.mmax < 1:
        raise UsageError("--kmax and --mmax must be at least 1")
    pipe = _pipeline(args)
    calc = pipe.donaldson()
    ks = list(range(1, args.kmax + 1))
    ms = list(range(1, args.mmax + 1))
    cells = {(q.k, q.m): q.chi for q in donaldson_table(calc, ks, ms, pipe.threads)}
    print(render_grid(cells, ks, ms, args.format), file=out)
    if args.check:
        grid = pipe.fx.grid()
        bad = [(k, m) for (k, m), v in grid.items() if (k, m) in cells and cells[(k, m)] != v]
        for k, m in sorted(bad):
            print(f"mismatch at k={k}, m={m}: expected {grid[(k, m)]}, computed {cells[(k, m)]}", file=sys.stderr)
        return EXIT_MISMATCH if bad else EXIT_OK
    return EXIT_OK


def cmd_euler(args, out) -> int:
    pipe = _pipeline(args)
    chi = pipe.donaldson().euler(args.k, args.m)
    if args.format == "json":
        print(json.dumps({"k": args.k, "m": args.m, "chi": str(chi)}), file=out)
    elif args.format == "csv":
        print(f"k,m,chi\n{args.k},{args.m},{chi}", file=out)
    else:
        print(chi, file=out)
    return EXIT_OK


def cmd_export(args, out) -> int:
    if args.ring not in RINGS:
        raise UsageError(f"unknown ring {args.ring!r}; choose from {', '.join(RINGS)}")
    pipe = _pipeline(args)
    doc = pipe.ring(args.ring).export()
    print(json.dumps(doc, indent=1), file=out)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "stage": cmd_stage,
    "donaldson": cmd_donaldson,
    "euler": cmd_euler,
    "export": cmd_export,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FixtureError as exc:
        print(f"fixture error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ResourceExhausted, NonIntegralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # anything else is a bug or a broken construction
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
