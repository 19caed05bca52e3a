"""The gradual cast language: syntax, type checking, small-step evaluation.

Types are ``?`` (dynamic), ``1`` (unit), products, sums and functions.
Terms carry explicit casts ``<A => B> e`` and a runtime error ``err``;
variables are de Bruijn indices.  Evaluation is left-to-right
call-by-value under a fuel budget.
"""

from dataclasses import dataclass


# ---------------------------------------------------------------- types

class GType:
    pass


@dataclass(frozen=True)
class Dyn(GType):
    pass


@dataclass(frozen=True)
class Unit(GType):
    pass


@dataclass(frozen=True)
class Prod(GType):
    left: GType
    right: GType


@dataclass(frozen=True)
class Sum(GType):
    left: GType
    right: GType


@dataclass(frozen=True)
class Fun(GType):
    dom: GType
    cod: GType


#: The four shapes a value can be tagged with at type ?.
TAGS = (Unit(), Prod(Dyn(), Dyn()), Sum(Dyn(), Dyn()), Fun(Dyn(), Dyn()))


def is_tag(a: GType) -> bool:
    return a in TAGS


def floor(a: GType) -> GType:
    """The runtime tag of a non-dynamic type: 1, ?*?, ?+? or ?->?."""
    match a:
        case Unit():
            return Unit()
        case Prod(_, _):
            return Prod(Dyn(), Dyn())
        case Sum(_, _):
            return Sum(Dyn(), Dyn())
        case Fun(_, _):
            return Fun(Dyn(), Dyn())
    raise ValueError("the dynamic type has no tag")


# ---------------------------------------------------------------- terms

class GTerm:
    pass


@dataclass(frozen=True)
class Err(GTerm):
    """The runtime error; carries its ascribed type so checking stays
    syntax-directed."""
    ann: GType


@dataclass(frozen=True)
class Var(GTerm):
    ix: int


@dataclass(frozen=True)
class UnitVal(GTerm):
    pass


@dataclass(frozen=True)
class Pair(GTerm):
    left: GTerm
    right: GTerm


@dataclass(frozen=True)
class MatchPair(GTerm):
    """match scrut with (x, y) -> body; body binds two (x outer, y inner).

    Binder ascriptions are optional; the parser records them when written.
    """
    scrut: GTerm
    lann: GType | None
    rann: GType | None
    body: GTerm


@dataclass(frozen=True)
class Inl(GTerm):
    ann: GType  # the full sum type injected into
    body: GTerm


@dataclass(frozen=True)
class Inr(GTerm):
    ann: GType
    body: GTerm


@dataclass(frozen=True)
class Case(GTerm):
    scrut: GTerm
    lann: GType | None
    left: GTerm  # binds one
    rann: GType | None
    right: GTerm  # binds one


@dataclass(frozen=True)
class Lam(GTerm):
    dom: GType
    body: GTerm  # binds one


@dataclass(frozen=True)
class App(GTerm):
    fn: GTerm
    arg: GTerm


@dataclass(frozen=True)
class Cast(GTerm):
    src: GType
    tgt: GType
    body: GTerm


def is_value(t: GTerm) -> bool:
    """Values: (), pairs/injections of values, lambdas, and tagged values
    <G => ?> v where G is a tag type."""
    match t:
        case UnitVal() | Lam(_, _):
            return True
        case Pair(l, r):
            return is_value(l) and is_value(r)
        case Inl(_, b) | Inr(_, b):
            return is_value(b)
        case Cast(src, Dyn(), b):
            return is_tag(src) and is_value(b)
    return False


# ---------------------------------------------------------------- typing

GEnv = tuple  # typing context: env[0] is the innermost binder


class TypeCheckError(Exception):
    def __init__(self, msg: str, path: str = "top"):
        self.path = path
        super().__init__(f"{msg} [at {path}]")


def typecheck_gradual(env, t: GTerm, _path: str = "top") -> GType:
    """Synthesize the unique type of t under env, or raise TypeCheckError."""
    match t:
        case Err(ann):
            return ann
        case Var(ix):
            if 0 <= ix < len(env):
                return env[ix]
            raise TypeCheckError(f"unbound variable index {ix}", _path)
        case UnitVal():
            return Unit()
        case Pair(l, r):
            return Prod(typecheck_gradual(env, l, _path + ".left"),
                        typecheck_gradual(env, r, _path + ".right"))
        case MatchPair(scrut, lann, rann, body):
            st = typecheck_gradual(env, scrut, _path + ".scrut")
            match st:
                case Prod(a, b):
                    if lann is not None and lann != a:
                        raise TypeCheckError("binder ascription disagrees with scrutinee", _path)
                    if rann is not None and rann != b:
                        raise TypeCheckError("binder ascription disagrees with scrutinee", _path)
                    return typecheck_gradual((b, a) + tuple(env), body, _path + ".body")
            raise TypeCheckError("match-pair scrutinee is not a product", _path)
        case Inl(ann, body):
            match ann:
                case Sum(a, _):
                    bt = typecheck_gradual(env, body, _path + ".body")
                    if bt != a:
                        raise TypeCheckError("inl body does not fit the ascribed sum", _path)
                    return ann
            raise TypeCheckError("inl ascription is not a sum type", _path)
        case Inr(ann, body):
            match ann:
                case Sum(_, b):
                    bt = typecheck_gradual(env, body, _path + ".body")
                    if bt != b:
                        raise TypeCheckError("inr body does not fit the ascribed sum", _path)
                    return ann
            raise TypeCheckError("inr ascription is not a sum type", _path)
        case Case(scrut, lann, left, rann, right):
            st = typecheck_gradual(env, scrut, _path + ".scrut")
            match st:
                case Sum(a, b):
                    if lann is not None and lann != a:
                        raise TypeCheckError("binder ascription disagrees with scrutinee", _path)
                    if rann is not None and rann != b:
                        raise TypeCheckError("binder ascription disagrees with scrutinee", _path)
                    lt = typecheck_gradual((a,) + tuple(env), left, _path + ".inl")
                    rt = typecheck_gradual((b,) + tuple(env), right, _path + ".inr")
                    if lt != rt:
                        raise TypeCheckError("case branches have different types", _path)
                    return lt
            raise TypeCheckError("case scrutinee is not a sum", _path)
        case Lam(dom, body):
            return Fun(dom, typecheck_gradual((dom,) + tuple(env), body, _path + ".body"))
        case App(fn, arg):
            ft = typecheck_gradual(env, fn, _path + ".fn")
            match ft:
                case Fun(dom, cod):
                    at = typecheck_gradual(env, arg, _path + ".arg")
                    if at != dom:
                        raise TypeCheckError("argument type does not match the domain", _path)
                    return cod
            raise TypeCheckError("applied term is not a function", _path)
        case Cast(src, tgt, body):
            bt = typecheck_gradual(env, body, _path + ".body")
            if bt != src:
                raise TypeCheckError("cast body does not have the source type", _path)
            return tgt
    raise TypeCheckError(f"unrecognized term {t!r}", _path)


# ------------------------------------------------------- substitution

def shift(t: GTerm, amount: int, cutoff: int = 0) -> GTerm:
    match t:
        case Var(k):
            return Var(k + amount) if k >= cutoff else t
        case Err(_) | UnitVal():
            return t
        case Pair(l, r):
            return Pair(shift(l, amount, cutoff), shift(r, amount, cutoff))
        case MatchPair(s, la, ra, b):
            return MatchPair(shift(s, amount, cutoff), la, ra, shift(b, amount, cutoff + 2))
        case Inl(ann, b):
            return Inl(ann, shift(b, amount, cutoff))
        case Inr(ann, b):
            return Inr(ann, shift(b, amount, cutoff))
        case Case(s, la, l, ra, r):
            return Case(shift(s, amount, cutoff), la, shift(l, amount, cutoff + 1),
                        ra, shift(r, amount, cutoff + 1))
        case Lam(dom, b):
            return Lam(dom, shift(b, amount, cutoff + 1))
        case App(f, a):
            return App(shift(f, amount, cutoff), shift(a, amount, cutoff))
        case Cast(src, tgt, b):
            return Cast(src, tgt, shift(b, amount, cutoff))
    raise AssertionError(f"shift: {t!r}")


def subst(t: GTerm, ix: int, repl: GTerm) -> GTerm:
    """Replace Var(ix) by repl in t, closing over one binder level."""
    match t:
        case Var(k):
            if k == ix:
                return repl
            return Var(k - 1) if k > ix else t
        case Err(_) | UnitVal():
            return t
        case Pair(l, r):
            return Pair(subst(l, ix, repl), subst(r, ix, repl))
        case MatchPair(s, la, ra, b):
            return MatchPair(subst(s, ix, repl), la, ra,
                             subst(b, ix + 2, shift(repl, 2)))
        case Inl(ann, b):
            return Inl(ann, subst(b, ix, repl))
        case Inr(ann, b):
            return Inr(ann, subst(b, ix, repl))
        case Case(s, la, l, ra, r):
            return Case(subst(s, ix, repl), la, subst(l, ix + 1, shift(repl, 1)),
                        ra, subst(r, ix + 1, shift(repl, 1)))
        case Lam(dom, b):
            return Lam(dom, subst(b, ix + 1, shift(repl, 1)))
        case App(f, a):
            return App(subst(f, ix, repl), subst(a, ix, repl))
        case Cast(src, tgt, b):
            return Cast(src, tgt, subst(b, ix, repl))
    raise AssertionError(f"subst: {t!r}")


def subst_top(body: GTerm, value: GTerm) -> GTerm:
    return subst(body, 0, value)


def subst_top2(body: GTerm, first: GTerm, second: GTerm) -> GTerm:
    # body binds (first, second) with second innermost
    return subst_top(subst(body, 0, shift(second, 1)), first)


# ------------------------------------------------------- evaluation

class StuckTerm(Exception):
    """A closed well-typed non-value failed to step: an interpreter bug."""


def step_rule(t: GTerm) -> "tuple[GTerm, str] | None":
    """One reduction step plus the name of the rule fired, None if terminal.

    Terminal means value or err.  A redex position holding err (or a cast
    between incompatibly tagged types) discards the whole surrounding
    program in a single step.
    """
    if is_value(t) or isinstance(t, Err):
        return None
    out = _focus(t)
    if out[0] == "step":
        return out[1], out[2]
    # the program collapses to err; re-ascribe at the program's own type
    return Err(typecheck_gradual((), t)), out[1]


def step_gradual(t: GTerm) -> "GTerm | None":
    nxt = step_rule(t)
    return None if nxt is None else nxt[0]


def _focus(t: GTerm):
    """Find the active position left-to-right and fire one rule there.

    Returns ("value",) if t is a value, ("step", t2, rule) for an ordinary
    reduction, or ("halt", rule) when the whole program becomes err.
    """
    if is_value(t):
        return ("value",)
    match t:
        case Err(_):
            return ("halt", "err-halt")
        case Cast(src, tgt, body):
            r = _focus(body)
            if r[0] == "step":
                return ("step", Cast(src, tgt, r[1]), r[2])
            if r[0] == "halt":
                return r
            return _reduce_cast(src, tgt, body)
        case Pair(l, rgt):
            if not is_value(l):
                r = _focus(l)
                return ("step", Pair(r[1], rgt), r[2]) if r[0] == "step" else r
            r = _focus(rgt)
            return ("step", Pair(l, r[1]), r[2]) if r[0] == "step" else r
        case Inl(ann, body):
            r = _focus(body)
            return ("step", Inl(ann, r[1]), r[2]) if r[0] == "step" else r
        case Inr(ann, body):
            r = _focus(body)
            return ("step", Inr(ann, r[1]), r[2]) if r[0] == "step" else r
        case App(fn, arg):
            if not is_value(fn):
                r = _focus(fn)
                return ("step", App(r[1], arg), r[2]) if r[0] == "step" else r
            if not is_value(arg):
                r = _focus(arg)
                return ("step", App(fn, r[1]), r[2]) if r[0] == "step" else r
            match fn:
                case Lam(_, body):
                    return ("step", subst_top(body, arg), "beta")
            raise StuckTerm(f"applied non-function value {fn!r}")
        case MatchPair(scrut, lann, rann, body):
            if not is_value(scrut):
                r = _focus(scrut)
                return ("step", MatchPair(r[1], lann, rann, body), r[2]) if r[0] == "step" else r
            match scrut:
                case Pair(v1, v2):
                    return ("step", subst_top2(body, v1, v2), "split-pair")
            raise StuckTerm(f"match-pair on non-pair value {scrut!r}")
        case Case(scrut, lann, left, rann, right):
            if not is_value(scrut):
                r = _focus(scrut)
                return ("step", Case(r[1], lann, left, rann, right), r[2]) if r[0] == "step" else r
            match scrut:
                case Inl(_, v):
                    return ("step", subst_top(left, v), "case-inl")
                case Inr(_, v):
                    return ("step", subst_top(right, v), "case-inr")
            raise StuckTerm(f"case on non-injection value {scrut!r}")
        case Var(_):
            raise StuckTerm("free variable in evaluation position")
    raise StuckTerm(f"no rule for {t!r}")


def _reduce_cast(src: GType, tgt: GType, v: GTerm):
    """Reduce <src => tgt> v for a value v (the cast itself is not a value)."""
    match (src, tgt):
        case (Dyn(), Dyn()):
            return ("step", v, "cast-dyn-id")
        case (Unit(), Unit()):
            # forced by the pair/sum/fun rules, which produce unit-to-unit
            # casts that no other rule consumes
            return ("step", v, "cast-unit-id")
        case (Prod(a1, b1), Prod(a2, b2)):
            match v:
                case Pair(v1, v2):
                    return ("step", Pair(Cast(a1, a2, v1), Cast(b1, b2, v2)), "cast-pair")
            raise StuckTerm(f"product cast on non-pair {v!r}")
        case (Sum(a1, b1), Sum(a2, b2)):
            match v:
                case Inl(_, w):
                    return ("step", Inl(Sum(a2, b2), Cast(a1, a2, w)), "cast-sum-inl")
                case Inr(_, w):
                    return ("step", Inr(Sum(a2, b2), Cast(b1, b2, w)), "cast-sum-inr")
            raise StuckTerm(f"sum cast on non-injection {v!r}")
        case (Fun(a1, b1), Fun(a2, b2)):
            wrapped = Lam(a2, Cast(b1, b2, App(shift(v, 1), Cast(a2, a1, Var(0)))))
            return ("step", wrapped, "cast-fun")
        case (_, Dyn()):
            tag = floor(src)
            if tag == src:
                # <G => ?> v is a value; _focus never sends it here
                raise StuckTerm("tagged value reached cast reduction")
            return ("step", Cast(tag, Dyn(), Cast(src, tag, v)), "cast-tag-up")
        case (Dyn(), _):
            tag = floor(tgt)
            if tag != tgt:
                return ("step", Cast(tag, tgt, Cast(Dyn(), tag, v)), "cast-tag-down")
            match v:
                case Cast(g, Dyn(), w):
                    if g == tgt:
                        return ("step", w, "cast-tag-hit")
                    return ("halt", "cast-tag-miss")
            raise StuckTerm(f"projection from ? on untagged value {v!r}")
    # both sides non-dynamic with different connectives: tags disagree
    assert floor(src) != floor(tgt)
    return ("halt", "cast-mismatch")


# ------------------------------------------------------- outcomes

class Outcome:
    pass


@dataclass(frozen=True)
class Value(Outcome):
    term: object  # the final value (a gradual or typed term)


@dataclass(frozen=True)
class Errored(Outcome):
    """The program halted with the runtime error."""


@dataclass(frozen=True)
class FuelExhausted(Outcome):
    last: object


def eval_gradual(t: GTerm, fuel: int) -> Outcome:
    """Run t for at most fuel steps."""
    return eval_gradual_counting(t, fuel)[0]


def eval_gradual_counting(t: GTerm, fuel: int) -> "tuple[Outcome, int]":
    """Like eval_gradual, but also report how many steps were taken."""
    for used in range(fuel):
        if is_value(t):
            return Value(t), used
        if isinstance(t, Err):
            return Errored(), used
        t = step_rule(t)[0]
    if is_value(t):
        return Value(t), fuel
    if isinstance(t, Err):
        return Errored(), fuel
    return FuelExhausted(t), fuel
