"""Type dynamism (precision) and what it induces.

``a`` is less dynamic than ``b`` when ``b`` can be reached from ``a`` by
replacing subtrees with ``?``; the order is decided here by building the
unique canonical derivation.  Derivations compose, have identities and a
top (everything is below ``?``), and compile — in embed or project mode —
to one-hole contexts in the typed target.  The module also decides the
syntactic precision relation on gradual terms, which the graduality
suite uses as its acceptance filter.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from . import elaborate as el
from . import gradual as g


# ---------------------------------------------------- derivations

class DynDeriv:
    pass


@dataclass(frozen=True)
class IdBase(DynDeriv):
    base: g.GType  # Dyn or Unit only; deeper identities are congruences


@dataclass(frozen=True)
class TagComp(DynDeriv):
    """a below ? by way of its tag: tag must be floor(a) and rest proves
    a below the tag."""
    tag: g.GType
    rest: DynDeriv


@dataclass(frozen=True)
class ProdD(DynDeriv):
    left: DynDeriv
    right: DynDeriv


@dataclass(frozen=True)
class SumD(DynDeriv):
    left: DynDeriv
    right: DynDeriv


@dataclass(frozen=True)
class FunD(DynDeriv):
    # covariant on both sides, unlike subtyping
    dom: DynDeriv
    cod: DynDeriv


@lru_cache(maxsize=None)
def endpoints(c: DynDeriv) -> "tuple[g.GType, g.GType]":
    """The pair (a, b) a derivation proves a below b."""
    match c:
        case IdBase(b):
            return b, b
        case TagComp(_, rest):
            return endpoints(rest)[0], g.Dyn()
        case ProdD(l, r):
            (a1, b1), (a2, b2) = endpoints(l), endpoints(r)
            return g.Prod(a1, a2), g.Prod(b1, b2)
        case SumD(l, r):
            (a1, b1), (a2, b2) = endpoints(l), endpoints(r)
            return g.Sum(a1, a2), g.Sum(b1, b2)
        case FunD(d, cc):
            (a1, b1), (a2, b2) = endpoints(d), endpoints(cc)
            return g.Fun(a1, a2), g.Fun(b1, b2)
    raise AssertionError(f"endpoints: {c!r}")


def deriv_wf(c: DynDeriv) -> bool:
    """Re-derive the structural side conditions of a canonical derivation."""
    match c:
        case IdBase(b):
            return b in (g.Dyn(), g.Unit())
        case TagComp(tag, rest):
            src, tgt = endpoints(rest)
            return (deriv_wf(rest) and src != g.Dyn()
                    and g.floor(src) == tag and tgt == tag)
        case ProdD(l, r) | SumD(l, r) | FunD(l, r):
            return deriv_wf(l) and deriv_wf(r)
    return False


def check_dynamism(a: g.GType, b: g.GType) -> "DynDeriv | None":
    """The canonical derivation of a below b, or None when unrelated."""
    match (a, b):
        case (g.Dyn(), g.Dyn()):
            return IdBase(g.Dyn())
        case (_, g.Dyn()):
            rest = check_dynamism(a, g.floor(a))
            return None if rest is None else TagComp(g.floor(a), rest)
        case (g.Unit(), g.Unit()):
            return IdBase(g.Unit())
        case (g.Prod(a1, a2), g.Prod(b1, b2)):
            l, r = check_dynamism(a1, b1), check_dynamism(a2, b2)
            return ProdD(l, r) if l is not None and r is not None else None
        case (g.Sum(a1, a2), g.Sum(b1, b2)):
            l, r = check_dynamism(a1, b1), check_dynamism(a2, b2)
            return SumD(l, r) if l is not None and r is not None else None
        case (g.Fun(a1, a2), g.Fun(b1, b2)):
            l, r = check_dynamism(a1, b1), check_dynamism(a2, b2)
            return FunD(l, r) if l is not None and r is not None else None
    return None


def deriv_id(a: g.GType) -> DynDeriv:
    match a:
        case g.Dyn() | g.Unit():
            return IdBase(a)
        case g.Prod(l, r):
            return ProdD(deriv_id(l), deriv_id(r))
        case g.Sum(l, r):
            return SumD(deriv_id(l), deriv_id(r))
        case g.Fun(d, c):
            return FunD(deriv_id(d), deriv_id(c))
    raise AssertionError(f"deriv_id: {a!r}")


def deriv_compose(c: DynDeriv, d: DynDeriv) -> DynDeriv:
    """c after d: d proves a1 below a2, c proves a2 below a3."""
    if endpoints(d)[1] != endpoints(c)[0]:
        raise ValueError("composed derivations do not meet at a common type")
    match c:
        case TagComp(tag, rest):
            return TagComp(tag, deriv_compose(rest, d))
        case IdBase(_):
            return d
        case ProdD(c1, c2):
            match d:
                case ProdD(d1, d2):
                    return ProdD(deriv_compose(c1, d1), deriv_compose(c2, d2))
        case SumD(c1, c2):
            match d:
                case SumD(d1, d2):
                    return SumD(deriv_compose(c1, d1), deriv_compose(c2, d2))
        case FunD(c1, c2):
            match d:
                case FunD(d1, d2):
                    return FunD(deriv_compose(c1, d1), deriv_compose(c2, d2))
    raise ValueError(f"non-canonical composition {c!r} after {d!r}")


def deriv_top(a: g.GType) -> DynDeriv:
    """The derivation placing a below ?."""
    match a:
        case g.Dyn():
            return IdBase(g.Dyn())
        case g.Unit():
            return TagComp(g.Unit(), IdBase(g.Unit()))
        case g.Prod(l, r):
            return TagComp(g.Prod(g.Dyn(), g.Dyn()), ProdD(deriv_top(l), deriv_top(r)))
        case g.Sum(l, r):
            return TagComp(g.Sum(g.Dyn(), g.Dyn()), SumD(deriv_top(l), deriv_top(r)))
        case g.Fun(d, c):
            return TagComp(g.Fun(g.Dyn(), g.Dyn()), FunD(deriv_top(d), deriv_top(c)))
    raise AssertionError(f"deriv_top: {a!r}")


# ------------------------------------------------ ep-pair synthesis

class Mode(Enum):
    EMBED = "e"
    PROJECT = "p"

    def complement(self) -> "Mode":
        return Mode.PROJECT if self is Mode.EMBED else Mode.EMBED


def ep_cast(mode: Mode, c: DynDeriv) -> el.CastCtx:
    """Compile a derivation of a below b to a context: embed mode goes
    from (the translation of) a to b, project mode from b back to a."""
    match c:
        case IdBase(b):
            return el.hole_ctx(el.translate_type(b))
        case TagComp(tag, rest):
            if mode is Mode.EMBED:
                return el.compose(el.embed_tag(tag), ep_cast(mode, rest))
            return el.compose(ep_cast(mode, rest), el.project_tag(tag))
        case ProdD(l, r):
            return el.functor_prod(ep_cast(mode, l), ep_cast(mode, r))
        case SumD(l, r):
            return el.functor_sum(ep_cast(mode, l), ep_cast(mode, r))
        case FunD(d, cc):
            return el.functor_fun(ep_cast(mode.complement(), d), ep_cast(mode, cc))
    raise AssertionError(f"ep_cast: {c!r}")


# ------------------------------------------------ term dynamism

@dataclass(frozen=True)
class TermRelation:
    related: bool
    left: "g.GType | None" = None  # the two result types when related
    right: "g.GType | None" = None
    reason: "str | None" = None


class _NotRelated(Exception):
    pass


def _contains_err(t: g.GTerm) -> bool:
    match t:
        case g.Err(_):
            return True
        case g.Var(_) | g.UnitVal():
            return False
        case g.Pair(l, r) | g.App(l, r):
            return _contains_err(l) or _contains_err(r)
        case g.MatchPair(s, _, _, b):
            return _contains_err(s) or _contains_err(b)
        case g.Inl(_, b) | g.Inr(_, b) | g.Lam(_, b) | g.Cast(_, _, b):
            return _contains_err(b)
        case g.Case(s, _, l, _, r):
            return _contains_err(s) or _contains_err(l) or _contains_err(r)
    raise AssertionError(f"_contains_err: {t!r}")


def check_term_dynamism(env1, env2, t1: g.GTerm, t2: g.GTerm) -> TermRelation:
    """Decide the syntactic precision relation between two well-typed terms.

    The relation is syntax-directed on the term pair: same shape, every
    annotation pair related, variables pointing at the same slot of
    pointwise-related environments.  The error term has no rule and is
    rejected up front (ValueError)."""
    if _contains_err(t1) or _contains_err(t2):
        raise ValueError("the error term is not related to anything syntactically")
    env1, env2 = tuple(env1), tuple(env2)
    if len(env1) != len(env2) or any(
            check_dynamism(a, b) is None for a, b in zip(env1, env2)):
        return TermRelation(False, reason="environments are not pointwise related")
    try:
        left, right = _rel(env1, env2, t1, t2)
    except _NotRelated as stop:
        return TermRelation(False, reason=str(stop))
    return TermRelation(True, left, right)


def _need(a: g.GType, b: g.GType, what: str):
    if check_dynamism(a, b) is None:
        raise _NotRelated(f"{what} annotations are not related")


def _rel(env1, env2, t1, t2):
    match (t1, t2):
        case (g.Var(i), g.Var(j)):
            if i != j:
                raise _NotRelated("different variables")
            return env1[i], env2[i]
        case (g.UnitVal(), g.UnitVal()):
            return g.Unit(), g.Unit()
        case (g.Pair(l1, r1), g.Pair(l2, r2)):
            a1, a2 = _rel(env1, env2, l1, l2)
            b1, b2 = _rel(env1, env2, r1, r2)
            return g.Prod(a1, b1), g.Prod(a2, b2)
        case (g.Inl(s1, b1), g.Inl(s2, b2)):
            _need(s1, s2, "sum")
            _rel(env1, env2, b1, b2)
            return s1, s2
        case (g.Inr(s1, b1), g.Inr(s2, b2)):
            _need(s1, s2, "sum")
            _rel(env1, env2, b1, b2)
            return s1, s2
        case (g.MatchPair(s1, _, _, b1), g.MatchPair(s2, _, _, b2)):
            st1, st2 = _rel(env1, env2, s1, s2)
            match (st1, st2):
                case (g.Prod(x1, y1), g.Prod(x2, y2)):
                    return _rel((y1, x1) + env1, (y2, x2) + env2, b1, b2)
            raise _NotRelated("match-pair scrutinees are not products")
        case (g.Case(s1, _, l1, _, r1), g.Case(s2, _, l2, _, r2)):
            st1, st2 = _rel(env1, env2, s1, s2)
            match (st1, st2):
                case (g.Sum(x1, y1), g.Sum(x2, y2)):
                    out = _rel((x1,) + env1, (x2,) + env2, l1, l2)
                    out_r = _rel((y1,) + env1, (y2,) + env2, r1, r2)
                    if out != out_r:
                        raise _NotRelated("case branches disagree")
                    return out
            raise _NotRelated("case scrutinees are not sums")
        case (g.Lam(d1, b1), g.Lam(d2, b2)):
            _need(d1, d2, "domain")
            c1, c2 = _rel((d1,) + env1, (d2,) + env2, b1, b2)
            return g.Fun(d1, c1), g.Fun(d2, c2)
        case (g.App(f1, a1), g.App(f2, a2)):
            ft1, ft2 = _rel(env1, env2, f1, f2)
            _rel(env1, env2, a1, a2)
            match (ft1, ft2):
                case (g.Fun(_, c1), g.Fun(_, c2)):
                    return c1, c2
            raise _NotRelated("applied terms are not functions")
        case (g.Cast(s1, d1, b1), g.Cast(s2, d2, b2)):
            _need(s1, s2, "cast source")
            _need(d1, d2, "cast target")
            _rel(env1, env2, b1, b2)
            return d1, d2
    raise _NotRelated(
        f"structure mismatch: {type(t1).__name__} vs {type(t2).__name__}")
