"""Command-line front end: ``gradsum check|synth|fragment|elaborate|run|relations|fuzz``.

Exit codes: 0 success, 1 type error (or suite failures), 2 parse error,
3 evaluation ended in matchfail, 4 evaluation ran out of steps.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import relations as rel
from .elaborate import ElabMode, elab_derivation, ty_trans
from .syntax import EMPTY, Ctx, ParseError, Pos, parse_expr, parse_type, print_target
from .target import Stuck, VerdictKind, evaluate
from .typecheck import (
    Checker, DYNAMIC, FULL, STATIC, TypeCheckError, dyn_check, dyn_synth, static_check,
    static_synth,
)

OK, TYPE_ERROR, PARSE_ERROR, MATCHFAIL, OUT_OF_STEPS = 0, 1, 2, 3, 4


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def parse_ctx(text: str) -> Ctx:
    """``x : A, y : B`` as a context.  Types contain no commas, so commas separate bindings."""
    g = EMPTY
    for k, part in enumerate(filter(str.strip, text.split(","))):
        name, colon, ty = part.partition(":")
        name = name.strip()
        if not colon or not name.isidentifier():
            raise ParseError(f"binding {k + 1} of the context should look like x : A", Pos(1, 1), (":",))
        g = g.extend(name, parse_type(ty))
    return g


def _derive(args, system=FULL):
    """Parse the file (and ``--type``, ``--ctx``), then check or synthesize.  Returns (type, derivation)."""
    e = parse_expr(_read(args.file))
    goal = parse_type(args.type) if getattr(args, "type", None) else None
    g = parse_ctx(args.ctx) if getattr(args, "ctx", None) else EMPTY
    if system is FULL:
        checker = Checker(FULL)
        if goal is not None:
            return goal, checker.check(g, e, goal)
        return checker.synth(g, e)
    chk, syn = (static_check, static_synth) if system is STATIC else (dyn_check, dyn_synth)
    if goal is not None:
        return goal, chk(g, e, goal)
    return syn(g, e)


def _report_typing(args, a, d):
    if args.emit_derivation == "json":
        print(json.dumps(d.to_json(), indent=2))
    else:
        arrow = "<=" if d.direction == "check" else "=>"
        print(f"{arrow} {a}")


def cmd_check(args):
    a, d = _derive(args)
    _report_typing(args, a, d)
    return OK


def cmd_fragment(args):
    system = STATIC if args.static else DYNAMIC
    a, d = _derive(args, system)
    _report_typing(args, a, d)
    return OK


def _elaborate(args):
    a, d = _derive(args)
    mode = ElabMode.SATURATING if args.saturate else ElabMode.STANDARD
    return a, elab_derivation(d, mode)


def cmd_elaborate(args):
    a, m = _elaborate(args)
    if args.emit == "json":
        print(json.dumps({"type": str(a), "target_type": str(ty_trans(a)),
                          "mode": "saturating" if args.saturate else "standard",
                          "term": print_target(m)}, indent=2))
    else:
        print(print_target(m))
    return OK


def cmd_run(args):
    _, m = _elaborate(args)
    try:
        v = evaluate(m, budget=args.max_steps, trace=args.trace)
    except Stuck as exc:  # cannot happen for elaborated terms; reported rather than hidden
        print(f"stuck: {exc}", file=sys.stderr)
        return TYPE_ERROR
    if args.trace:
        print(f"  start {print_target(m)}")
        for k, (rule, term) in enumerate(v.trace, 1):
            print(f"{k:>4} {rule:<18} {print_target(term)}")
    match v.kind:
        case VerdictKind.VALUE:
            print(f"value {print_target(v.term)} after {v.steps} steps")
            return OK
        case VerdictKind.MATCHFAIL:
            print(f"matchfail after {v.steps} steps")
            return MATCHFAIL
    print(f"no result within {v.steps} steps")
    return OUT_OF_STEPS


def cmd_relations(args):
    rows, cols, cells = rel.sum_table(args.table)
    if args.json:
        print(json.dumps({"table": args.table, "rows": rows, "cols": cols, "cells": cells}, indent=2))
    else:
        width = max(len(s) for s in rows + cols)
        print(" " * width + " " + " ".join(c.rjust(width) for c in cols))
        for r, row in zip(rows, cells):
            print(r.rjust(width) + " " + " ".join(c.rjust(width) for c in row))
    if args.plot:
        from .plotting import plot_table
        print(f"wrote {plot_table(args.table, args.plot)}", file=sys.stderr)
    return OK


def cmd_fuzz(args):
    from .harness.suites import SUITES, SuiteConfig, run_suite

    cfg = SuiteConfig(seed=args.seed, count=args.count, size=args.size, depth=args.depth,
                      enum_size=args.enum_size, jobs=args.jobs)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_suite(n, cfg) for n in names]
    if args.json:
        body = [r.to_json() for r in reports]
        print(json.dumps(body[0] if len(body) == 1 else body, indent=2, sort_keys=True))
    else:
        for r in reports:
            print(r.summary())
    if args.plot:
        from .plotting import plot_coverage
        out = Path(args.plot)
        out.mkdir(parents=True, exist_ok=True)
        for r in reports:
            print(f"wrote {plot_coverage(r, out / f'{r.suite}-coverage.png')}", file=sys.stderr)
    return OK if all(r.ok for r in reports) else TYPE_ERROR


def build_parser() -> argparse.ArgumentParser:
    from .harness.suites import SUITES

    p = argparse.ArgumentParser(prog="gradsum", description="Gradual sum types toolchain.")
    sub = p.add_subparsers(dest="command", required=True)

    def source_cmd(name, help_, fn, type_flag=True, derivation=False, ctx=True):
        s = sub.add_parser(name, help=help_)
        s.add_argument("file", help="a .gsum source file, or - for stdin")
        if type_flag:
            s.add_argument("--type", metavar="A", help="check against A instead of synthesizing")
        if ctx:
            s.add_argument("--ctx", metavar="BINDINGS", help='free variables, e.g. "x : Unit +? Unit, y : Unit"')
        if derivation:
            s.add_argument("--emit-derivation", choices=["json"], help="print the derivation tree")
        s.set_defaults(fn=fn)
        return s

    source_cmd("check", "typecheck a program", cmd_check, derivation=True)
    source_cmd("synth", "synthesize the type of a program", cmd_check, type_flag=False, derivation=True)
    f = source_cmd("fragment", "typecheck in the static or dynamic fragment", cmd_fragment, derivation=True)
    g = f.add_mutually_exclusive_group(required=True)
    g.add_argument("--static", action="store_true")
    g.add_argument("--dynamic", action="store_true")

    e = source_cmd("elaborate", "translate into the cast calculus", cmd_elaborate)
    e.add_argument("--saturate", action="store_true", help="use the cast-saturating translation")
    e.add_argument("--emit", choices=["target", "json"], default="target")

    r = source_cmd("run", "elaborate and evaluate", cmd_run, ctx=False)
    r.add_argument("--saturate", action="store_true")
    r.add_argument("--max-steps", type=int, default=100_000)
    r.add_argument("--trace", action="store_true", help="print every step with its rule")

    t = sub.add_parser("relations", help="print a relation table")
    t.add_argument("--table", choices=rel.TABLES, required=True)
    t.add_argument("--json", action="store_true")
    t.add_argument("--plot", metavar="PNG", help="also render the table as an image")
    t.set_defaults(fn=cmd_relations)

    z = sub.add_parser("fuzz", help="run a metatheory suite")
    z.add_argument("--suite", choices=list(SUITES) + ["all"], required=True)
    z.add_argument("--size", type=int, default=25, help="max size of random programs")
    z.add_argument("--count", type=int, default=1000, help="number of random programs")
    z.add_argument("--seed", type=int, default=0)
    z.add_argument("--depth", type=int, default=2, help="type depth of random programs")
    z.add_argument("--enum-size", type=int, default=5, help="exhaustive enumeration bound")
    z.add_argument("--jobs", type=int, default=1)
    z.add_argument("--json", action="store_true")
    z.add_argument("--plot", metavar="DIR", help="write rule-coverage charts into DIR")
    z.set_defaults(fn=cmd_fuzz)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return PARSE_ERROR
    except TypeCheckError as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return TYPE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
