"""Property suites: each runs seeded cases against one semantic law of
the calculus and aggregates three-valued verdicts into a SuiteReport.

Every case derives its randomness from (seed, suite, index), so a
witness file naming those three replays exactly one case.  Fails always
carries a witness; Inconclusive names its cause (fuel or sampling) and
is counted separately rather than guessed away.
"""

import random
import time
from dataclasses import asdict, dataclass, replace

from . import approx
from . import dynamism as dyn
from . import elaborate as el
from . import gradual as g
from . import propgen
from . import surface
from . import typed as tt
from .gradual import Errored, FuelExhausted, Value
from .propgen import GenConfig
from .report import SuiteReport


@dataclass
class CaseResult:
    verdict: str  # "holds" | "fails" | "inconclusive"
    cause: str = ""
    witness: "dict | None" = None
    detail: str = ""
    notes: "dict | None" = None


def _case_rng(cfg: GenConfig, suite: str, i: int, stream: str = "") -> random.Random:
    return random.Random(f"{cfg.seed}:{suite}:{i}:{stream}")


def _cmp_seed(cfg: GenConfig, suite: str, i: int) -> str:
    return f"{cfg.seed}:{suite}:{i}:cmp"


def _from_verdict(v: approx.Verdict, detail: str = "",
                  extra: "dict | None" = None,
                  notes: "dict | None" = None) -> CaseResult:
    match v:
        case approx.Holds():
            return CaseResult("holds", detail=detail, notes=notes)
        case approx.Inconclusive(cause):
            return CaseResult("inconclusive", cause, detail=detail, notes=notes)
    witness = dict(v.witness)
    witness.update(extra or {})
    return CaseResult("fails", witness.get("reason", ""), witness, detail, notes)


def _all_hold(checks, detail: str = "", notes: "dict | None" = None) -> CaseResult:
    """Combine labelled verdicts: any failure wins, else any inconclusive."""
    for label, v in checks:
        if isinstance(v, approx.Fails):
            return _from_verdict(v, detail, {"part": label}, notes)
    for label, v in checks:
        if isinstance(v, approx.Inconclusive):
            return CaseResult("inconclusive", v.cause, detail=detail, notes=notes)
    return CaseResult("holds", detail=detail, notes=notes)


def _related_pair(cfg, rng):
    """b and some a below it, with the canonical derivation."""
    b = propgen.gen_type(cfg, rng=rng)
    a = propgen.gen_related_type(cfg, b, rng=rng)
    return a, b, dyn.check_dynamism(a, b)


# ------------------------------------------------- ep-pair suites

def retraction_case(cfg: GenConfig, i: int) -> CaseResult:
    """Projecting a just-embedded value gives the value back, and the
    embedding itself never errs or diverges."""
    rng = _case_rng(cfg, "retraction", i)
    a, b, c = _related_pair(cfg, rng)
    v = el.translate_term(propgen.gen_value(cfg, a, rng=rng))
    e = dyn.ep_cast(dyn.Mode.EMBED, c)
    p = dyn.ep_cast(dyn.Mode.PROJECT, c)
    detail = f"{surface.print_gradual_type(a)} below {surface.print_gradual_type(b)}"
    embedded = el.plug(e, v)
    out = tt.eval_typed(embedded, cfg.fuel).outcome
    if isinstance(out, FuelExhausted):
        return CaseResult("inconclusive", "fuel", detail=detail,
                          notes={"embedding_exhausted": 1})
    if not isinstance(out, Value):
        return CaseResult("fails", "embedding was not pure", {
            "reason": "embedding errored on a value",
            "value": surface.print_typed(v), "types": detail,
        }, detail)
    verdict = approx.compare_equiv(el.plug(p, embedded), v, cfg.fuel,
                                   cfg.samples, _cmp_seed(cfg, "retraction", i))
    return _from_verdict(verdict, detail, {"types": detail},
                         notes={"purity_checked": 1})


def projection_case(cfg: GenConfig, i: int) -> CaseResult:
    """Projections of values terminate (value or error), and embedding a
    projected value approximates the original from below."""
    rng = _case_rng(cfg, "projection", i)
    a, b, c = _related_pair(cfg, rng)
    w = el.translate_term(propgen.gen_value(cfg, b, rng=rng))
    e = dyn.ep_cast(dyn.Mode.EMBED, c)
    p = dyn.ep_cast(dyn.Mode.PROJECT, c)
    detail = f"{surface.print_gradual_type(a)} below {surface.print_gradual_type(b)}"
    out = tt.eval_typed(el.plug(p, w), cfg.fuel).outcome
    if isinstance(out, FuelExhausted):
        return CaseResult("inconclusive", "fuel", detail=detail,
                          notes={"projection_exhausted": 1})
    verdict = approx.compare_error_approx(
        el.plug(e, el.plug(p, w)), w, cfg.fuel, cfg.samples,
        _cmp_seed(cfg, "projection", i))
    return _from_verdict(verdict, detail, {"types": detail},
                         notes={"termination_checked": 1})


def decomposition_case(cfg: GenConfig, i: int) -> CaseResult:
    """ep-pairs of composed derivations are the composites of the
    pieces, in both modes."""
    rng = _case_rng(cfg, "decomposition", i)
    a3 = propgen.gen_type(cfg, rng=rng)
    a2 = propgen.gen_related_type(cfg, a3, rng=rng)
    a1 = propgen.gen_related_type(cfg, a2, rng=rng)
    c21 = dyn.check_dynamism(a1, a2)
    c32 = dyn.check_dynamism(a2, a3)
    c31 = dyn.deriv_compose(c32, c21)
    detail = " below ".join(surface.print_gradual_type(x) for x in (a1, a2, a3))
    seed = _cmp_seed(cfg, "decomposition", i)
    v = el.translate_term(propgen.gen_value(cfg, a1, rng=rng))
    up = approx.compare_equiv(
        el.plug(dyn.ep_cast(dyn.Mode.EMBED, c31), v),
        el.plug(dyn.ep_cast(dyn.Mode.EMBED, c32),
                el.plug(dyn.ep_cast(dyn.Mode.EMBED, c21), v)),
        cfg.fuel, cfg.samples, seed)
    w = el.translate_term(propgen.gen_value(cfg, a3, rng=rng))
    down = approx.compare_equiv(
        el.plug(dyn.ep_cast(dyn.Mode.PROJECT, c31), w),
        el.plug(dyn.ep_cast(dyn.Mode.PROJECT, c21),
                el.plug(dyn.ep_cast(dyn.Mode.PROJECT, c32), w)),
        cfg.fuel, cfg.samples, seed)
    return _all_hold([("embed", up), ("project", down)], detail)


def ud_are_casts_case(cfg: GenConfig, i: int) -> CaseResult:
    """The compiled up- and downcasts between related types agree with
    the ep-pair the derivation induces."""
    rng = _case_rng(cfg, "ud_are_casts", i)
    a, b, c = _related_pair(cfg, rng)
    detail = f"{surface.print_gradual_type(a)} below {surface.print_gradual_type(b)}"
    seed = _cmp_seed(cfg, "ud_are_casts", i)
    v = el.translate_term(propgen.gen_value(cfg, a, rng=rng))
    up = approx.compare_equiv(el.plug(el.cast_ctx(a, b), v),
                              el.plug(dyn.ep_cast(dyn.Mode.EMBED, c), v),
                              cfg.fuel, cfg.samples, seed)
    w = el.translate_term(propgen.gen_value(cfg, b, rng=rng))
    down = approx.compare_equiv(el.plug(el.cast_ctx(b, a), w),
                                el.plug(dyn.ep_cast(dyn.Mode.PROJECT, c), w),
                                cfg.fuel, cfg.samples, seed)
    return _all_hold([("upcast", up), ("downcast", down)], detail)


_FORCED_FACTOR = (
    (g.Unit(), g.Fun(g.Dyn(), g.Dyn())),
    (g.Prod(g.Unit(), g.Unit()), g.Sum(g.Dyn(), g.Unit())),
    (g.Fun(g.Unit(), g.Unit()), g.Prod(g.Dyn(), g.Dyn())),
    (g.Sum(g.Unit(), g.Unit()), g.Unit()),
    (g.Unit(), g.Prod(g.Unit(), g.Unit())),
)


def factorization_case(cfg: GenConfig, i: int) -> CaseResult:
    """Any compiled cast agrees with projecting after embedding through
    ?.  The first few cases pin incompatible-tag pairs, where both
    sides must err."""
    rng = _case_rng(cfg, "factorization", i)
    if i < len(_FORCED_FACTOR):
        a1, a2 = _FORCED_FACTOR[i]
    else:
        a1 = propgen.gen_type(cfg, rng=rng)
        a2 = propgen.gen_type(cfg, rng=rng)
    detail = f"{surface.print_gradual_type(a1)} to {surface.print_gradual_type(a2)}"
    v = el.translate_term(propgen.gen_value(cfg, a1, rng=rng))
    lhs = el.plug(el.cast_ctx(a1, a2), v)
    rhs = el.plug(dyn.ep_cast(dyn.Mode.PROJECT, dyn.deriv_top(a2)),
                  el.plug(dyn.ep_cast(dyn.Mode.EMBED, dyn.deriv_top(a1)), v))
    verdict = approx.compare_equiv(lhs, rhs, cfg.fuel, cfg.samples,
                                   _cmp_seed(cfg, "factorization", i))
    return _from_verdict(verdict, detail, {"types": detail})


def reflexivity_case(cfg: GenConfig, i: int) -> CaseResult:
    """The ep-pair of an identity derivation behaves as the identity."""
    rng = _case_rng(cfg, "reflexivity", i)
    a = propgen.gen_type(cfg, rng=rng)
    c = dyn.deriv_id(a)
    v = el.translate_term(propgen.gen_value(cfg, a, rng=rng))
    detail = surface.print_gradual_type(a)
    seed = _cmp_seed(cfg, "reflexivity", i)
    em = approx.compare_equiv(el.plug(dyn.ep_cast(dyn.Mode.EMBED, c), v), v,
                              cfg.fuel, cfg.samples, seed)
    pr = approx.compare_equiv(el.plug(dyn.ep_cast(dyn.Mode.PROJECT, c), v), v,
                              cfg.fuel, cfg.samples, seed)
    return _all_hold([("embed", em), ("project", pr)], detail)


# --------------------------------------------- whole-program suites

def adequacy_case(cfg: GenConfig, i: int) -> CaseResult:
    """Source evaluation and compiled evaluation agree: same value (up
    to translation), same error, with the compiled run given 16x fuel."""
    rng = _case_rng(cfg, "adequacy", i)
    ty = propgen.gen_type(cfg, rng=rng)
    t = propgen.gen_term(cfg, (), ty, rng=rng)
    out_g, gsteps = g.eval_gradual_counting(t, cfg.fuel)
    out_t, tsteps = tt.eval_typed_counting(el.translate_term(t), 16 * cfg.fuel)
    detail = surface.print_gradual(t)[:80]
    notes = {}
    if gsteps:
        notes["max_expansion"] = round(tsteps / gsteps, 2)
    match (out_g, out_t.outcome):
        case (Value(v), Value(w)):
            if el.translate_term(v) == w:
                return CaseResult("holds", detail=detail, notes=notes)
            return CaseResult("fails", "translated value mismatch", {
                "reason": "translated value mismatch",
                "program": surface.print_gradual(t),
                "source_value": surface.print_gradual(v),
                "target_value": surface.print_typed(w),
            }, detail, notes)
        case (Errored(), Errored()):
            return CaseResult("holds", detail=detail, notes=notes)
        case (FuelExhausted(_), FuelExhausted(_)):
            notes["both_exhausted"] = 1
            return CaseResult("holds", detail=detail, notes=notes)
        case (FuelExhausted(_), _) | (_, FuelExhausted(_)):
            return CaseResult("inconclusive", "fuel", detail=detail, notes=notes)
    return CaseResult("fails", "outcomes disagree", {
        "reason": f"source {type(out_g).__name__} vs target "
                  f"{type(out_t.outcome).__name__}",
        "program": surface.print_gradual(t),
    }, detail, notes)


def graduality_case(cfg: GenConfig, i: int) -> CaseResult:
    """A less dynamic term, cast to the more dynamic type, can only
    introduce errors relative to the more dynamic term."""
    rng = _case_rng(cfg, "graduality", i)
    gcfg = replace(cfg, cast_probability=max(cfg.cast_probability, 0.5),
                   max_term_size=max(cfg.max_term_size, 18))
    pair = None
    for draw in range(40):
        ty = propgen.gen_type(gcfg, rng=rng)
        t2 = propgen.gen_term(gcfg, (), ty, rng=rng)
        pairs = propgen.mutate_less_dynamic(gcfg, t2, rng=rng, attempts=12)
        if pairs:
            pair = pairs[0]
            break
    if pair is None:
        return CaseResult("inconclusive", "sampling",
                          detail="no accepted mutant", notes={"draws": draw + 1})
    t1, t2 = pair
    b1 = g.typecheck_gradual((), t1)
    b2 = g.typecheck_gradual((), t2)
    c = dyn.check_dynamism(b1, b2)
    lhs, rhs = approx.build_graduality_pair(t1, t2, c)
    verdict = approx.compare_error_approx(lhs, rhs, cfg.fuel, cfg.samples,
                                          _cmp_seed(cfg, "graduality", i))
    detail = surface.print_gradual(t2)[:80]
    extra = {"less_dynamic": surface.print_gradual(t1),
             "more_dynamic": surface.print_gradual(t2)}
    return _from_verdict(verdict, detail, extra,
                         notes={"accepted": 1, "draws": draw + 1})


def _check_gradual_steps(t: g.GTerm, fuel: int):
    """Walk a reduction sequence re-typing every step; returns an error
    dict or None, plus rule counts."""
    rules = {}
    ty = g.typecheck_gradual((), t)
    cur = t
    for _ in range(fuel):
        if g.is_value(cur) or isinstance(cur, g.Err):
            break
        try:
            got = g.step_rule(cur)
            again = g.step_rule(cur)
        except g.StuckTerm as stuck:
            return {"reason": f"progress violated: {stuck}",
                    "term": surface.print_gradual(cur)}, rules
        if got != again:
            return {"reason": "nondeterministic step",
                    "term": surface.print_gradual(cur)}, rules
        nxt, rule = got
        rules[rule] = rules.get(rule, 0) + 1
        try:
            ty2 = g.typecheck_gradual((), nxt)
        except g.TypeCheckError as err:
            return {"reason": f"subject reduction broke typing: {err}",
                    "term": surface.print_gradual(nxt), "rule": rule}, rules
        if ty2 != ty:
            return {"reason": "subject reduction changed the type",
                    "term": surface.print_gradual(nxt), "rule": rule}, rules
        cur = nxt
    return None, rules


def _check_typed_steps(t: tt.TTerm, fuel: int):
    rules = {}
    ty = tt.typecheck_typed((), t)
    cur, weight = t, 0
    for _ in range(fuel):
        if tt.is_value(cur) or isinstance(cur, tt.Err):
            break
        try:
            got = tt.step_rule_typed(cur)
            again = tt.step_rule_typed(cur)
        except tt.StuckTerm as stuck:
            return {"reason": f"progress violated: {stuck}",
                    "term": surface.print_typed(cur)}, rules
        if got != again:
            return {"reason": "nondeterministic step",
                    "term": surface.print_typed(cur)}, rules
        nxt, w, rule = got
        rules[rule] = rules.get(rule, 0) + 1
        weight += w
        try:
            ty2 = tt.typecheck_typed((), nxt)
        except tt.TypeCheckError as err:
            return {"reason": f"subject reduction broke typing: {err}",
                    "term": surface.print_typed(nxt), "rule": rule}, rules
        if ty2 != ty:
            return {"reason": "subject reduction changed the type",
                    "term": surface.print_typed(nxt), "rule": rule}, rules
        cur = nxt
    else:
        return None, rules
    # the per-step weights must agree with the evaluator's unroll count
    recount = tt.eval_typed(t, fuel)
    if not isinstance(recount.outcome, FuelExhausted) and recount.unrolls != weight:
        return {"reason": "unroll weight recount mismatch",
                "term": surface.print_typed(t)}, rules
    return None, rules


def meta_case(cfg: GenConfig, i: int) -> CaseResult:
    """Subject reduction, progress, and determinism on every step of a
    random program, in the source and through its translation."""
    rng = _case_rng(cfg, "meta", i)
    ty = propgen.gen_type(cfg, rng=rng)
    t = propgen.gen_term(cfg, (), ty, rng=rng)
    detail = surface.print_gradual(t)[:80]
    bad, grules = _check_gradual_steps(t, cfg.fuel)
    if bad is not None:
        return CaseResult("fails", bad["reason"], {"language": "gradual", **bad},
                          detail)
    bad, trules = _check_typed_steps(el.translate_term(t), cfg.fuel)
    if bad is not None:
        return CaseResult("fails", bad["reason"], {"language": "typed", **bad},
                          detail)
    notes = {f"rule:{r}": n for r, n in grules.items()}
    for r, n in trules.items():
        notes[f"rule:{r}"] = notes.get(f"rule:{r}", 0) + n
    return CaseResult("holds", detail=detail, notes=notes)


# ------------------------------------------------------ the runner

SUITES = {
    "retraction": retraction_case,
    "projection": projection_case,
    "decomposition": decomposition_case,
    "ud_are_casts": ud_are_casts_case,
    "factorization": factorization_case,
    "adequacy": adequacy_case,
    "graduality": graduality_case,
    "meta": meta_case,
    "reflexivity": reflexivity_case,
}


def run_case(name: str, cfg: GenConfig, index: int) -> CaseResult:
    return SUITES[name](cfg, index)


def run_suite(name: str, cfg: GenConfig, count: int) -> SuiteReport:
    case = SUITES[name]
    start = time.perf_counter()
    tallies = {"holds": 0, "fails": 0, "inconclusive": 0}
    rows, witnesses, notes = [], [], {}
    for i in range(count):
        res = case(cfg, i)
        tallies[res.verdict] += 1
        rows.append({"case": i, "verdict": res.verdict, "cause": res.cause,
                     "detail": res.detail})
        if res.witness is not None:
            witnesses.append({"suite": name, "case": i, "verdict": res.verdict,
                              "config": asdict(cfg), **res.witness})
        for k, v in (res.notes or {}).items():
            notes[k] = max(notes.get(k, 0), v) if k.startswith("max_") \
                else notes.get(k, 0) + v
    return SuiteReport(
        suite=name, cases=count, holds=tallies["holds"], fails=tallies["fails"],
        inconclusive=tallies["inconclusive"],
        wall_seconds=time.perf_counter() - start, config=asdict(cfg),
        rows=rows, witnesses=witnesses, notes=notes)
