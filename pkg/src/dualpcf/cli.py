"""Command-line driver: check, eval, verify, examples.

Exit codes: 0 success, 1 parse or type error, 2 budget or refinement
ceiling exhausted, 3 result undetermined.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .analysis import (
    OracleGrid, check_L_soundness, check_monotone_refinement, relation_holds,
)
from .corpus import CORPUS, FIRST_ORDER_FUNCTIONS, corpus_source, load_corpus, load_first_order
from .lang import Arrow, DUAL, REAL, ParseError, parse
from .machine import (
    BudgetExhausted, CeilingReached, DEFAULT_BUDGET, Undetermined, Value,
    eval_at_cost, eval_refine,
)
from .numeric import DualInterval, Interval, fmt_endpoint, in_dual
from .typecheck import TypeCheckError, elaborate

EXIT_OK = 0
EXIT_FRONTEND = 1
EXIT_BUDGET = 2
EXIT_UNDETERMINED = 3


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("DUALPCF_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _load(path: str):
    with open(path) as fh:
        src = fh.read()
    return elaborate(parse(src), {})


def _iv_json(iv: Interval) -> dict:
    return {"lo": fmt_endpoint(iv.lo), "hi": fmt_endpoint(iv.hi)}


def _render(value, cost: int, steps: int, fmt: str) -> str:
    dv = in_dual(value) if isinstance(value, Interval) else value
    if fmt == "json" and isinstance(dv, DualInterval):
        return json.dumps({"std": _iv_json(dv.std), "inf": _iv_json(dv.inf),
                           "cost": cost, "steps": steps})
    if fmt == "json":
        return json.dumps({"value": str(value), "cost": cost, "steps": steps})
    return f"{value}"


def cmd_check(args) -> int:
    try:
        _, ty = _load(args.file)
    except (ParseError, TypeCheckError) as ex:
        print(ex, file=sys.stderr)
        return EXIT_FRONTEND
    print(ty)
    return EXIT_OK


def _eval_term(e, args) -> int:
    budget = _budget(args)
    t0 = time.monotonic()
    if args.width is not None:
        try:
            v, cost = eval_refine(e, Fraction(args.width),
                                  cost_ceiling=args.ceiling, budget=budget)
        except CeilingReached as c:
            print(f"ceiling reached at cost {c.cost}; best: {c.best}",
                  file=sys.stderr)
            return EXIT_BUDGET
        print(_render(v, cost, 0, args.format))
        if args.format == "text":
            print(f"# cost {cost}, {time.monotonic() - t0:.2f}s",
                  file=sys.stderr)
        return EXIT_OK
    out = eval_at_cost(e, args.cost, budget)
    if isinstance(out, Undetermined):
        print("undetermined:", out.reason, file=sys.stderr)
        print("undetermined")
        return EXIT_UNDETERMINED
    if isinstance(out, BudgetExhausted):
        print(f"step budget exhausted after {out.steps} steps",
              file=sys.stderr)
        return EXIT_BUDGET
    print(_render(out.value, args.cost, out.steps, args.format))
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        e, _ = _load(args.file)
    except (ParseError, TypeCheckError) as ex:
        print(ex, file=sys.stderr)
        return EXIT_FRONTEND
    return _eval_term(e, args)


def cmd_examples(args) -> int:
    if args.action == "list":
        for name, entry in CORPUS.items():
            flags = " ".join(f for f in
                             (["heavy"] if entry.heavy else []) +
                             (["advanced"] if entry.advanced else []))
            suffix = f"  [{flags}]" if flags else ""
            print(f"{name:28} {entry.description}{suffix}")
        return EXIT_OK
    names = [args.name] if args.name else [
        n for n, e in CORPUS.items() if not e.advanced]
    rc = EXIT_OK
    for name in names:
        if name not in CORPUS:
            print(f"unknown corpus program {name!r}", file=sys.stderr)
            return EXIT_FRONTEND
        e, _ = load_corpus(name)
        print(f"== {name}")
        code = _eval_term(e, args)
        rc = rc or code
    return rc


def _emit(report: dict) -> None:
    print(json.dumps(report))


def cmd_verify(args) -> int:
    ok = True
    seed = args.seed
    if args.suite in ("relations", "all"):
        rel_cases = _relation_cases()
        for name, ty, src in rel_cases:
            f, _ = elaborate(parse(src), {})
            v = relation_holds(Fraction(1, 8), ty, f, f, f,
                               fuel=args.fuel, seed=seed)
            _emit({"suite": "relations", "case": name,
                   "verdict": v.holds, "witness": v.detail})
            ok = ok and v.holds
    if args.suite in ("soundness", "all"):
        pairs = [(0, 1), (1, 1), (Fraction(-1, 2), 1), (Fraction(1, 2), -1),
                 (2, Fraction(1, 2))]
        for name in FIRST_ORDER_FUNCTIONS:
            f = load_first_order(name)
            for x, xp in pairs:
                v = check_L_soundness(f, x, xp)
                _emit({"suite": "soundness", "case": f"{name}@({x},{xp})",
                       "verdict": v.holds, "witness": v.detail})
                ok = ok and v.holds
    if args.suite in ("refinement", "all"):
        for name, entry in CORPUS.items():
            e, _ = load_corpus(name)
            top = 4 if entry.heavy else 10
            v = check_monotone_refinement(e, range(top + 1))
            _emit({"suite": "refinement", "case": name,
                   "verdict": v.holds, "witness": v.detail})
            ok = ok and v.holds
    print("all suites passed" if ok else "FAILURES detected", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FRONTEND


def _relation_cases():
    d = DUAL
    dd = Arrow(d, d)
    return [
        ("add", Arrow(d, dd), "fun x: delta. fun y: delta. x + y"),
        ("sub", Arrow(d, dd), "fun x: delta. fun y: delta. x - y"),
        ("mul", Arrow(d, dd), "fun x: delta. fun y: delta. x * y"),
        ("div2", dd, "fun x: delta. x / 2"),
        ("max", Arrow(d, dd), "fun x: delta. fun y: delta. max(x, y)"),
        ("min", Arrow(d, dd), "fun x: delta. fun y: delta. min(x, y)"),
        ("pr", dd, "fun x: delta. pr x"),
        ("in_delta", Arrow(REAL, d), "fun x: real. in_delta x"),
        ("int", Arrow(Arrow(REAL, d), d), "fun f: real -> delta. int f"),
        ("sup", Arrow(Arrow(REAL, d), d), "fun f: real -> delta. sup f"),
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="dualpcf",
        description="Interpreter for a language computing directional "
                    "derivatives with interval-valued dual numbers")
    sub = ap.add_subparsers(dest="command", required=True)

    def eval_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--cost", type=int, default=4,
                       help="cost index for a single evaluation")
        g.add_argument("--width", help="refine until widths reach this "
                                       "rational target")
        p.add_argument("--ceiling", type=int, default=4096,
                       help="cost ceiling for refinement")
        p.add_argument("--budget", type=int, default=None,
                       help="global step budget (default from "
                            "DUALPCF_BUDGET or 10^7)")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check", help="parse and type-check a program")
    p.add_argument("file")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("eval", help="evaluate a program")
    p.add_argument("file")
    eval_flags(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("examples", help="list or run the bundled corpus")
    p.add_argument("action", choices=("list", "run"))
    p.add_argument("name", nargs="?",
                   help="program name (default: all non-advanced)")
    eval_flags(p)
    p.set_defaults(fn=cmd_examples)

    p = sub.add_parser("verify", help="run the conformance suites")
    p.add_argument("--suite", default="all",
                   choices=("relations", "soundness", "refinement", "all"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fuel", type=int, default=100,
                   help="samples per relation case")
    p.set_defaults(fn=cmd_verify)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
