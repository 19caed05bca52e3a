"""The lamg command line: evaluate and compile gradual programs, query
the dynamism order, compare programs observationally, and run the
property suites with machine-readable reports.

Exit codes: 0 success (value / related / holds), 1 error outcome or
failed verdict, 2 usage, parse, or type errors, 3 inconclusive only
(ran out of fuel or sampling depth with nothing decided).
"""

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import approx
from . import dynamism as dyn
from . import elaborate as el
from . import gradual as g
from . import propgen
from . import report as rep
from . import suites
from . import surface
from . import typed as tt
from .gradual import Errored, FuelExhausted, Value
from .propgen import GenConfig


class _Usage(Exception):
    pass


def _color_on() -> bool:
    return os.environ.get("LAMG_COLOR", "") not in ("", "0", "never")


def _diag(msg: str) -> None:
    if _color_on():
        msg = f"\x1b[31m{msg}\x1b[0m"
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise _Usage(f"cannot read {path}: {err.strerror or err}")


def _emit(args, obj: dict) -> None:
    print(json.dumps(obj, indent=2))


def _parse_program(path: str):
    """Gradual by default; .lamt files parse in the typed language."""
    src = _read(path)
    if path.endswith(".lamt"):
        return surface.parse_typed(src)
    return surface.parse_gradual(src)


# ------------------------------------------------------- commands

def cmd_run(args) -> int:
    t = surface.parse_gradual(_read(args.file))
    ty = g.typecheck_gradual((), t)
    out, steps = g.eval_gradual_counting(t, args.fuel)
    match out:
        case Value(v):
            line, code = f"value: {surface.print_gradual(v)}", 0
            term = surface.print_gradual(v)
        case Errored():
            line, code, term = "error: ℧", 1, None
        case FuelExhausted(_):
            line, code, term = f"fuel exhausted after {steps} steps", 3, None
    if args.json:
        _emit(args, {"outcome": _outcome_name(out), "term": term,
                     "type": surface.print_gradual_type(ty), "steps": steps})
    else:
        print(line)
    return code


def cmd_check(args) -> int:
    t = surface.parse_gradual(_read(args.file))
    ty = g.typecheck_gradual((), t)
    if args.json:
        _emit(args, {"type": surface.print_gradual_type(ty)})
    else:
        print(f"type: {surface.print_gradual_type(ty)}")
    return 0


def cmd_compile(args) -> int:
    t = surface.parse_gradual(_read(args.file))
    g.typecheck_gradual((), t)
    tr = el.translate_term(t)
    ty = tt.typecheck_typed((), tr)
    text = surface.print_typed(tr)
    if args.json:
        _emit(args, {"term": text, "type": surface.print_typed_type(ty)})
    elif args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_run_typed(args) -> int:
    t = surface.parse_typed(_read(args.file))
    ty = tt.typecheck_typed((), t)
    out, steps = tt.eval_typed_counting(t, args.fuel)
    match out.outcome:
        case Value(v):
            line, code = f"value: {surface.print_typed(v)}", 0
            term = surface.print_typed(v)
        case Errored():
            line, code, term = "error: ℧", 1, None
        case FuelExhausted(_):
            line, code, term = f"fuel exhausted after {steps} steps", 3, None
    if args.json:
        _emit(args, {"outcome": _outcome_name(out.outcome), "term": term,
                     "type": surface.print_typed_type(ty), "steps": steps,
                     "unrolls": out.unrolls})
    else:
        print(line)
        print(f"unrolls: {out.unrolls}")
    return code


def _deriv_str(c: dyn.DynDeriv) -> str:
    pt = surface.print_gradual_type
    match c:
        case dyn.IdBase(b):
            return f"id({pt(b)})"
        case dyn.TagComp(tag, rest):
            return f"tag({pt(tag)}) . {_deriv_str(rest)}"
        case dyn.ProdD(l, r):
            return f"({_deriv_str(l)} * {_deriv_str(r)})"
        case dyn.SumD(l, r):
            return f"({_deriv_str(l)} + {_deriv_str(r)})"
        case dyn.FunD(l, r):
            return f"({_deriv_str(l)} -> {_deriv_str(r)})"
    raise AssertionError


def cmd_dynamism(args) -> int:
    a = surface.parse_gradual_type(args.left)
    b = surface.parse_gradual_type(args.right)
    c = dyn.check_dynamism(a, b)
    if args.json:
        _emit(args, {"related": c is not None,
                     "derivation": None if c is None else _deriv_str(c),
                     "left": surface.print_gradual_type(a),
                     "right": surface.print_gradual_type(b)})
    else:
        print("unrelated" if c is None else _deriv_str(c))
    return 0 if c is not None else 1


def cmd_precision(args) -> int:
    t1 = surface.parse_gradual(_read(args.left))
    t2 = surface.parse_gradual(_read(args.right))
    rel = dyn.check_term_dynamism((), (), t1, t2)
    out = {"related": rel.related}
    if rel.related:
        out["left"] = surface.print_gradual_type(rel.left)
        out["right"] = surface.print_gradual_type(rel.right)
    else:
        out["reason"] = rel.reason
    if args.json:
        _emit(args, out)
    elif rel.related:
        print(f"related: {out['left']} below {out['right']}")
    else:
        print(f"unrelated: {rel.reason}")
    return 0 if rel.related else 1


def cmd_approx(args) -> int:
    t1 = _parse_program(args.left)
    t2 = _parse_program(args.right)
    stats = {}
    verdict = approx.compare_error_approx(t1, t2, args.fuel, args.samples,
                                          args.seed, stats)
    out = {"verdict": _verdict_name(verdict), "fuel_used": stats["fuel_used"],
           "samples": args.samples}
    code = 0
    match verdict:
        case approx.Fails(witness):
            out["witness"] = witness
            code = 1
        case approx.Inconclusive(cause):
            out["cause"] = cause
            code = 3
    if args.json:
        _emit(args, out)
    else:
        line = f"verdict: {out['verdict']}"
        if "cause" in out:
            line += f" ({out['cause']})"
        print(line)
        if "witness" in out:
            print(f"  reason: {out['witness']['reason']}")
    return code


def cmd_gen(args) -> int:
    cfg = GenConfig(seed=args.seed)
    target = None if args.target is None else surface.parse_gradual_type(args.target)
    programs = []
    for i in range(args.count):
        import random
        rng = random.Random(f"{args.seed}:gen:{i}")
        ty = target if target is not None else propgen.gen_type(cfg, rng=rng)
        t = propgen.gen_term(cfg, (), ty, rng=rng)
        programs.append({"term": surface.print_gradual(t),
                         "type": surface.print_gradual_type(ty)})
    if args.json:
        _emit(args, {"seed": args.seed, "programs": programs})
    else:
        for p in programs:
            print(p["term"])
    return 0


def cmd_props(args) -> int:
    name = args.suite.replace("-", "_")
    if name not in suites.SUITES:
        raise _Usage(f"unknown suite {args.suite!r}; choose from "
                     + ", ".join(sorted(suites.SUITES)))
    cfg = GenConfig(seed=args.seed, fuel=args.fuel, samples=args.samples)
    report = suites.run_suite(name, cfg, args.count)
    if args.report_dir:
        rep.write_report(report, args.report_dir)
    if args.json:
        _emit(args, report.to_dict())
    else:
        print(f"{report.suite}: {report.cases} cases — {report.holds} hold, "
              f"{report.fails} fail, {report.inconclusive} inconclusive "
              f"({report.wall_seconds:.2f}s)")
        for key, val in sorted(report.notes.items()):
            print(f"  {key}: {val}")
        if args.report_dir:
            print(f"report written to {Path(args.report_dir) / 'report.json'}")
    if report.fails > 0:
        return 1
    if report.holds == 0 and report.inconclusive > 0:
        return 3
    return 0


def cmd_replay(args) -> int:
    try:
        witness = json.loads(_read(args.witness))
    except json.JSONDecodeError as err:
        raise _Usage(f"bad witness file: {err}")
    for key in ("suite", "case", "config", "verdict"):
        if key not in witness:
            raise _Usage(f"witness file lacks {key!r}")
    cfg = GenConfig(**witness["config"])
    res = suites.run_case(witness["suite"], cfg, witness["case"])
    reproduced = res.verdict == witness["verdict"]
    if args.json:
        _emit(args, {"reproduced": reproduced, "verdict": res.verdict,
                     "expected": witness["verdict"]})
    else:
        print(f"expected {witness['verdict']}, got {res.verdict}: "
              + ("reproduced" if reproduced else "NOT reproduced"))
    return 0 if reproduced else 1


def _outcome_name(out) -> str:
    match out:
        case Value(_):
            return "value"
        case Errored():
            return "error"
    return "fuel"


def _verdict_name(v: approx.Verdict) -> str:
    match v:
        case approx.Holds():
            return "holds"
        case approx.Fails(_):
            return "fails"
    return "inconclusive"


# -------------------------------------------------------- wiring

def _add_common(p, fuel=True, json_flag=True):
    if fuel:
        p.add_argument("--fuel", type=int, default=2000,
                       help="step budget (default 2000)")
    if json_flag:
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="lamg",
        description="workbench for a gradually typed lambda calculus and "
                    "its typed compilation target")
    sub = top.add_subparsers(dest="cmd", metavar="COMMAND")

    p = sub.add_parser("run", help="evaluate a gradual program")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(entry=cmd_run)

    p = sub.add_parser("check", help="typecheck a gradual program")
    p.add_argument("file")
    _add_common(p, fuel=False)
    p.set_defaults(entry=cmd_check)

    p = sub.add_parser("compile", help="compile casts away into the typed target")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the .lamt text here instead of stdout")
    _add_common(p, fuel=False)
    p.set_defaults(entry=cmd_compile)

    p = sub.add_parser("run-typed", aliases=["run_typed"],
                       help="evaluate a typed program (.lamt)")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(entry=cmd_run_typed)

    p = sub.add_parser("dynamism", help="compare two types in the dynamism order")
    p.add_argument("left", metavar="TYPE1")
    p.add_argument("right", metavar="TYPE2")
    _add_common(p, fuel=False)
    p.set_defaults(entry=cmd_dynamism)

    p = sub.add_parser("precision", help="compare two programs in term precision")
    p.add_argument("left", metavar="FILE1")
    p.add_argument("right", metavar="FILE2")
    _add_common(p, fuel=False)
    p.set_defaults(entry=cmd_precision)

    p = sub.add_parser("approx", help="does FILE1 error-approximate FILE2?")
    p.add_argument("left", metavar="FILE1")
    p.add_argument("right", metavar="FILE2")
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(entry=cmd_approx)

    p = sub.add_parser("gen", help="dump a seeded corpus of programs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--target", help="generate at this type instead of random ones")
    _add_common(p, fuel=False)
    p.set_defaults(entry=cmd_gen)

    p = sub.add_parser("props", help="run a property suite")
    p.add_argument("suite", metavar="SUITE",
                   help="one of " + ", ".join(sorted(suites.SUITES)))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--report-dir", help="write report.json, cases.csv, "
                                        "witnesses, and summary.png here")
    _add_common(p)
    p.set_defaults(entry=cmd_props)

    p = sub.add_parser("replay", help="re-run the case a witness file records")
    p.add_argument("witness", metavar="WITNESS.json")
    _add_common(p, fuel=False)
    p.set_defaults(entry=cmd_replay)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cmd is None:
        parser.print_help()
        return 2
    try:
        return args.entry(args)
    except _Usage as err:
        _diag(str(err))
        return 2
    except surface.ParseError as err:
        _diag(f"parse error: {err}")
        return 2
    except g.TypeCheckError as err:
        _diag(f"type error: {err}")
        return 2
    except ValueError as err:
        _diag(str(err))
        return 2


if __name__ == "__main__":
    sys.exit(main())
