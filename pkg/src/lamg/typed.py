"""The typed target language: iso-recursive types, weighted evaluation.

Mirrors the gradual language minus ``?`` and casts, plus ``let``,
iso-recursive ``mu`` types with roll/unroll, and a ``Hole`` constructor
used only inside the cast contexts built by the elaborator.  Each small
step carries a weight: 1 for unrolling a rolled value, 0 otherwise.
"""

from dataclasses import dataclass

from .gradual import Errored, FuelExhausted, Outcome, StuckTerm, TypeCheckError, Value


# ---------------------------------------------------------------- types

class TType:
    pass


@dataclass(frozen=True)
class TVar(TType):
    ix: int


@dataclass(frozen=True)
class Mu(TType):
    body: TType  # binds one type variable


@dataclass(frozen=True)
class Unit(TType):
    pass


@dataclass(frozen=True)
class Prod(TType):
    left: TType
    right: TType


@dataclass(frozen=True)
class Sum(TType):
    left: TType
    right: TType


@dataclass(frozen=True)
class Fun(TType):
    dom: TType
    cod: TType


def tshift(ty: TType, amount: int, cutoff: int = 0) -> TType:
    match ty:
        case TVar(k):
            return TVar(k + amount) if k >= cutoff else ty
        case Mu(b):
            return Mu(tshift(b, amount, cutoff + 1))
        case Unit():
            return ty
        case Prod(l, r):
            return Prod(tshift(l, amount, cutoff), tshift(r, amount, cutoff))
        case Sum(l, r):
            return Sum(tshift(l, amount, cutoff), tshift(r, amount, cutoff))
        case Fun(d, c):
            return Fun(tshift(d, amount, cutoff), tshift(c, amount, cutoff))
    raise AssertionError(f"tshift: {ty!r}")


def tsubst(ty: TType, ix: int, repl: TType) -> TType:
    match ty:
        case TVar(k):
            if k == ix:
                return repl
            return TVar(k - 1) if k > ix else ty
        case Mu(b):
            return Mu(tsubst(b, ix + 1, tshift(repl, 1)))
        case Unit():
            return ty
        case Prod(l, r):
            return Prod(tsubst(l, ix, repl), tsubst(r, ix, repl))
        case Sum(l, r):
            return Sum(tsubst(l, ix, repl), tsubst(r, ix, repl))
        case Fun(d, c):
            return Fun(tsubst(d, ix, repl), tsubst(c, ix, repl))
    raise AssertionError(f"tsubst: {ty!r}")


def unfold(ty: Mu) -> TType:
    """One unrolling of a mu type: substitute the mu for its own variable."""
    return tsubst(ty.body, 0, ty)


def type_closed(ty: TType, depth: int = 0) -> bool:
    match ty:
        case TVar(k):
            return k < depth
        case Mu(b):
            return type_closed(b, depth + 1)
        case Unit():
            return True
        case Prod(l, r) | Sum(l, r) | Fun(l, r):
            return type_closed(l, depth) and type_closed(r, depth)
    raise AssertionError(f"type_closed: {ty!r}")


# ---------------------------------------------------------------- terms

class TTerm:
    pass


@dataclass(frozen=True)
class Err(TTerm):
    ann: TType


@dataclass(frozen=True)
class Var(TTerm):
    ix: int


@dataclass(frozen=True)
class Let(TTerm):
    bound: TTerm
    body: TTerm  # binds one


@dataclass(frozen=True)
class Roll(TTerm):
    ann: TType  # the mu type rolled into
    body: TTerm


@dataclass(frozen=True)
class Unroll(TTerm):
    body: TTerm


@dataclass(frozen=True)
class UnitVal(TTerm):
    pass


@dataclass(frozen=True)
class Pair(TTerm):
    left: TTerm
    right: TTerm


@dataclass(frozen=True)
class MatchPair(TTerm):
    scrut: TTerm
    body: TTerm  # binds two


@dataclass(frozen=True)
class Inl(TTerm):
    ann: TType  # the full sum type
    body: TTerm


@dataclass(frozen=True)
class Inr(TTerm):
    ann: TType
    body: TTerm


@dataclass(frozen=True)
class Case(TTerm):
    scrut: TTerm
    left: TTerm  # binds one
    right: TTerm  # binds one


@dataclass(frozen=True)
class Lam(TTerm):
    dom: TType
    body: TTerm  # binds one


@dataclass(frozen=True)
class App(TTerm):
    fn: TTerm
    arg: TTerm


@dataclass(frozen=True)
class Hole(TTerm):
    """Placeholder inside cast contexts; never part of a runnable program."""


def is_value(t: TTerm) -> bool:
    match t:
        case UnitVal() | Lam(_, _) | Var(_):
            return True
        case Pair(l, r):
            return is_value(l) and is_value(r)
        case Inl(_, b) | Inr(_, b) | Roll(_, b):
            return is_value(b)
    return False


def hole_count(t: TTerm) -> int:
    match t:
        case Hole():
            return 1
        case Err(_) | Var(_) | UnitVal():
            return 0
        case Let(b, body):
            return hole_count(b) + hole_count(body)
        case Roll(_, b) | Unroll(b) | Inl(_, b) | Inr(_, b):
            return hole_count(b)
        case Pair(l, r) | App(l, r):
            return hole_count(l) + hole_count(r)
        case MatchPair(s, b):
            return hole_count(s) + hole_count(b)
        case Case(s, l, r):
            return hole_count(s) + hole_count(l) + hole_count(r)
        case Lam(_, b):
            return hole_count(b)
    raise AssertionError(f"hole_count: {t!r}")


def hole_in_eval_position(t: TTerm) -> bool:
    """True when t's unique hole sits where evaluation would reach it next."""
    match t:
        case Hole():
            return True
        case Let(b, _):
            return hole_in_eval_position(b)
        case Roll(_, b) | Unroll(b) | Inl(_, b) | Inr(_, b):
            return hole_in_eval_position(b)
        case Pair(l, r):
            return hole_in_eval_position(l) or (is_value(l) and hole_in_eval_position(r))
        case App(f, a):
            return hole_in_eval_position(f) or (is_value(f) and hole_in_eval_position(a))
        case MatchPair(s, _):
            return hole_in_eval_position(s)
        case Case(s, _, _):
            return hole_in_eval_position(s)
    return False


# ---------------------------------------------------------------- typing

def typecheck_typed(env, t: TTerm, _path: str = "top") -> TType:
    """Synthesize the type of t; types compare syntactically (iso-recursive,
    no implicit unrolling)."""
    match t:
        case Hole():
            raise TypeCheckError("hole in a runnable program", _path)
        case Err(ann):
            if not type_closed(ann):
                raise TypeCheckError("open type ascription", _path)
            return ann
        case Var(ix):
            if 0 <= ix < len(env):
                return env[ix]
            raise TypeCheckError(f"unbound variable index {ix}", _path)
        case Let(bound, body):
            bt = typecheck_typed(env, bound, _path + ".bound")
            return typecheck_typed((bt,) + tuple(env), body, _path + ".body")
        case Roll(ann, body):
            match ann:
                case Mu(_):
                    if not type_closed(ann):
                        raise TypeCheckError("open type ascription", _path)
                    bt = typecheck_typed(env, body, _path + ".body")
                    if bt != unfold(ann):
                        raise TypeCheckError("roll body is not the unfolding", _path)
                    return ann
            raise TypeCheckError("roll ascription is not a mu type", _path)
        case Unroll(body):
            bt = typecheck_typed(env, body, _path + ".body")
            match bt:
                case Mu(_):
                    return unfold(bt)
            raise TypeCheckError("unroll of a non-mu type", _path)
        case UnitVal():
            return Unit()
        case Pair(l, r):
            return Prod(typecheck_typed(env, l, _path + ".left"),
                        typecheck_typed(env, r, _path + ".right"))
        case MatchPair(scrut, body):
            st = typecheck_typed(env, scrut, _path + ".scrut")
            match st:
                case Prod(a, b):
                    return typecheck_typed((b, a) + tuple(env), body, _path + ".body")
            raise TypeCheckError("match-pair scrutinee is not a product", _path)
        case Inl(ann, body):
            match ann:
                case Sum(a, _):
                    if not type_closed(ann):
                        raise TypeCheckError("open type ascription", _path)
                    if typecheck_typed(env, body, _path + ".body") != a:
                        raise TypeCheckError("inl body does not fit the ascribed sum", _path)
                    return ann
            raise TypeCheckError("inl ascription is not a sum type", _path)
        case Inr(ann, body):
            match ann:
                case Sum(_, b):
                    if not type_closed(ann):
                        raise TypeCheckError("open type ascription", _path)
                    if typecheck_typed(env, body, _path + ".body") != b:
                        raise TypeCheckError("inr body does not fit the ascribed sum", _path)
                    return ann
            raise TypeCheckError("inr ascription is not a sum type", _path)
        case Case(scrut, left, right):
            st = typecheck_typed(env, scrut, _path + ".scrut")
            match st:
                case Sum(a, b):
                    lt = typecheck_typed((a,) + tuple(env), left, _path + ".inl")
                    rt = typecheck_typed((b,) + tuple(env), right, _path + ".inr")
                    if lt != rt:
                        raise TypeCheckError("case branches have different types", _path)
                    return lt
            raise TypeCheckError("case scrutinee is not a sum", _path)
        case Lam(dom, body):
            if not type_closed(dom):
                raise TypeCheckError("open type ascription", _path)
            return Fun(dom, typecheck_typed((dom,) + tuple(env), body, _path + ".body"))
        case App(fn, arg):
            ft = typecheck_typed(env, fn, _path + ".fn")
            match ft:
                case Fun(dom, cod):
                    if typecheck_typed(env, arg, _path + ".arg") != dom:
                        raise TypeCheckError("argument type does not match the domain", _path)
                    return cod
            raise TypeCheckError("applied term is not a function", _path)
    raise TypeCheckError(f"unrecognized term {t!r}", _path)


# ------------------------------------------------------- substitution

def shift(t: TTerm, amount: int, cutoff: int = 0) -> TTerm:
    match t:
        case Var(k):
            return Var(k + amount) if k >= cutoff else t
        case Err(_) | UnitVal() | Hole():
            return t
        case Let(b, body):
            return Let(shift(b, amount, cutoff), shift(body, amount, cutoff + 1))
        case Roll(ann, b):
            return Roll(ann, shift(b, amount, cutoff))
        case Unroll(b):
            return Unroll(shift(b, amount, cutoff))
        case Pair(l, r):
            return Pair(shift(l, amount, cutoff), shift(r, amount, cutoff))
        case MatchPair(s, b):
            return MatchPair(shift(s, amount, cutoff), shift(b, amount, cutoff + 2))
        case Inl(ann, b):
            return Inl(ann, shift(b, amount, cutoff))
        case Inr(ann, b):
            return Inr(ann, shift(b, amount, cutoff))
        case Case(s, l, r):
            return Case(shift(s, amount, cutoff), shift(l, amount, cutoff + 1),
                        shift(r, amount, cutoff + 1))
        case Lam(dom, b):
            return Lam(dom, shift(b, amount, cutoff + 1))
        case App(f, a):
            return App(shift(f, amount, cutoff), shift(a, amount, cutoff))
    raise AssertionError(f"shift: {t!r}")


def subst(t: TTerm, ix: int, repl: TTerm) -> TTerm:
    match t:
        case Var(k):
            if k == ix:
                return repl
            return Var(k - 1) if k > ix else t
        case Err(_) | UnitVal() | Hole():
            return t
        case Let(b, body):
            return Let(subst(b, ix, repl), subst(body, ix + 1, shift(repl, 1)))
        case Roll(ann, b):
            return Roll(ann, subst(b, ix, repl))
        case Unroll(b):
            return Unroll(subst(b, ix, repl))
        case Pair(l, r):
            return Pair(subst(l, ix, repl), subst(r, ix, repl))
        case MatchPair(s, b):
            return MatchPair(subst(s, ix, repl), subst(b, ix + 2, shift(repl, 2)))
        case Inl(ann, b):
            return Inl(ann, subst(b, ix, repl))
        case Inr(ann, b):
            return Inr(ann, subst(b, ix, repl))
        case Case(s, l, r):
            return Case(subst(s, ix, repl), subst(l, ix + 1, shift(repl, 1)),
                        subst(r, ix + 1, shift(repl, 1)))
        case Lam(dom, b):
            return Lam(dom, subst(b, ix + 1, shift(repl, 1)))
        case App(f, a):
            return App(subst(f, ix, repl), subst(a, ix, repl))
    raise AssertionError(f"subst: {t!r}")


def subst_top(body: TTerm, value: TTerm) -> TTerm:
    return subst(body, 0, value)


def subst_top2(body: TTerm, first: TTerm, second: TTerm) -> TTerm:
    return subst_top(subst(body, 0, shift(second, 1)), first)


# ------------------------------------------------------- evaluation

@dataclass(frozen=True)
class WeightedOutcome:
    outcome: Outcome
    unrolls: int  # number of weight-1 steps taken


def step_rule_typed(t: TTerm) -> "tuple[TTerm, int, str] | None":
    """One step as (term, weight, rule), or None when t is terminal."""
    if is_value(t) or isinstance(t, Err):
        return None
    out = _focus(t)
    if out[0] == "step":
        return out[1], out[2], out[3]
    return Err(typecheck_typed((), t)), 0, out[1]


def step_typed(t: TTerm) -> "tuple[TTerm, int] | None":
    nxt = step_rule_typed(t)
    return None if nxt is None else (nxt[0], nxt[1])


def _focus(t: TTerm):
    # ("value",) | ("step", t2, weight, rule) | ("halt", rule)
    if is_value(t):
        return ("value",)

    def descend(sub, rebuild):
        r = _focus(sub)
        if r[0] == "step":
            return ("step", rebuild(r[1]), r[2], r[3])
        return r

    match t:
        case Err(_):
            return ("halt", "err-halt")
        case Let(bound, body):
            if not is_value(bound):
                return descend(bound, lambda x: Let(x, body))
            return ("step", subst_top(body, bound), 0, "let")
        case Roll(ann, body):
            return descend(body, lambda x: Roll(ann, x))
        case Unroll(body):
            if not is_value(body):
                return descend(body, lambda x: Unroll(x))
            match body:
                case Roll(_, v):
                    return ("step", v, 1, "unroll-roll")
            raise StuckTerm(f"unroll of non-rolled value {body!r}")
        case Pair(l, rgt):
            if not is_value(l):
                return descend(l, lambda x: Pair(x, rgt))
            return descend(rgt, lambda x: Pair(l, x))
        case Inl(ann, body):
            return descend(body, lambda x: Inl(ann, x))
        case Inr(ann, body):
            return descend(body, lambda x: Inr(ann, x))
        case App(fn, arg):
            if not is_value(fn):
                return descend(fn, lambda x: App(x, arg))
            if not is_value(arg):
                return descend(arg, lambda x: App(fn, x))
            match fn:
                case Lam(_, body):
                    return ("step", subst_top(body, arg), 0, "beta")
            raise StuckTerm(f"applied non-function value {fn!r}")
        case MatchPair(scrut, body):
            if not is_value(scrut):
                return descend(scrut, lambda x: MatchPair(x, body))
            match scrut:
                case Pair(v1, v2):
                    return ("step", subst_top2(body, v1, v2), 0, "split-pair")
            raise StuckTerm(f"match-pair on non-pair value {scrut!r}")
        case Case(scrut, left, right):
            if not is_value(scrut):
                return descend(scrut, lambda x: Case(x, left, right))
            match scrut:
                case Inl(_, v):
                    return ("step", subst_top(left, v), 0, "case-inl")
                case Inr(_, v):
                    return ("step", subst_top(right, v), 0, "case-inr")
            raise StuckTerm(f"case on non-injection value {scrut!r}")
        case Hole():
            raise StuckTerm("hole in a runnable program")
    raise StuckTerm(f"no rule for {t!r}")


def eval_typed(t: TTerm, fuel: int) -> WeightedOutcome:
    """Run t for at most fuel steps, accumulating unroll weight."""
    outcome, _steps = eval_typed_counting(t, fuel)
    return outcome


def eval_typed_counting(t: TTerm, fuel: int) -> "tuple[WeightedOutcome, int]":
    """Like eval_typed, also reporting how many steps were consumed."""
    unrolls = 0
    for used in range(fuel):
        if is_value(t):
            return WeightedOutcome(Value(t), unrolls), used
        if isinstance(t, Err):
            return WeightedOutcome(Errored(), unrolls), used
        t, w = step_typed(t)
        unrolls += w
    if is_value(t):
        return WeightedOutcome(Value(t), unrolls), fuel
    if isinstance(t, Err):
        return WeightedOutcome(Errored(), unrolls), fuel
    return WeightedOutcome(FuelExhausted(t), unrolls), fuel
