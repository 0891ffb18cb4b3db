"""Command-line entry point.

Exit status: 0 when every verdict passes, 1 on a mathematical failure,
2 on a structural error (unreadable spec, bad reference, budget exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _kernels, search as search_mod, specfile, zoo
from .errors import BudgetExceeded, ParseError, TwistcoError, ValidationError
from .linalg import Field

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run(args, allowed) -> int:
    try:
        spec = specfile.load_spec(args.spec)
    except (ParseError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = specfile.run_spec(spec, allowed, timing=not args.no_timing)
    _emit(specfile.dump_report(report), args.output)
    s = report["summary"]
    print(f"{s['pass']} passed, {s['fail']} failed, {s['error']} errors", file=sys.stderr)
    return specfile.exit_code(report)


def cmd_verify(args) -> int:
    return _run(args, None)


def cmd_equiv(args) -> int:
    return _run(args, specfile.EQUIV_TASKS)


def cmd_alg_verify(args) -> int:
    return _run(args, specfile.ALGEBRA_TASKS)


def cmd_zoo_list(args) -> int:
    for name, desc in zoo.list_zoo():
        print(f"{name:8s} {desc}")
    return EXIT_OK


def cmd_zoo_export(args) -> int:
    try:
        doc = specfile.export_zoo(args.name, Field.parse(args.field))
    except (KeyError, TwistcoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


def _search_coalgebras(args, f: Field):
    if args.coalgebras:
        return tuple(zoo.get(name, f) for name in args.coalgebras)
    n, m = args.dims
    return search_mod.grouplike_coalgebra(n, f), search_mod.grouplike_coalgebra(m, f)


def cmd_search(args) -> int:
    try:
        f = Field.parse(args.field)
        if f.is_rational:
            raise ValueError("search needs a prime field")
        C, D = _search_coalgebras(args, f)
        required = [r for r in args.require.split(",") if r]
        stream = search_mod.search(C, D, required, budget=args.budget, jobs=args.jobs, limit=args.limit)
        count = 0
        for hit in stream:
            print(json.dumps(hit.to_dict()))
            count += 1
    except (BudgetExceeded, TwistcoError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"{count} solutions ({_kernels.active().name} backend)", file=sys.stderr)
    return EXIT_OK


def _add_run_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec", help="spec file (JSON)")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--no-timing", action="store_true", help="omit timing fields for byte-stable reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistco", description="Twisted tensor products of coalgebras and algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run every task in a spec file")
    _add_run_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("equiv", help="run the equivalence tasks of a spec file")
    _add_run_opts(p)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("alg", help="algebra-side commands")
    alg_sub = p.add_subparsers(dest="alg_command", required=True)
    q = alg_sub.add_parser("verify", help="run the algebra tasks of a spec file")
    _add_run_opts(q)
    q.set_defaults(func=cmd_alg_verify)

    p = sub.add_parser("zoo", help="fixture catalogue")
    zoo_sub = p.add_subparsers(dest="zoo_command", required=True)
    q = zoo_sub.add_parser("list", help="list fixtures")
    q.set_defaults(func=cmd_zoo_list)
    q = zoo_sub.add_parser("export", help="print a fixture as a spec fragment")
    q.add_argument("name")
    q.add_argument("--field", default="Q")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_zoo_export)

    p = sub.add_parser("search", help="enumerate twists over a prime field")
    p.add_argument("--dims", nargs=2, type=int, metavar=("N_C", "N_D"), default=(2, 2))
    p.add_argument("--coalgebras", nargs=2, metavar=("C", "D"), help="zoo names instead of group-like coalgebras")
    p.add_argument("--field", default="2")
    p.add_argument("--require", default="octagon", help=f"comma-separated subset of {','.join(search_mod.CONSTRAINTS)}")
    p.add_argument("--budget", type=int, default=None, help="maximum candidates (default: $TWISTCO_SEARCH_BUDGET or 65536)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
