"""Compile the gradual language into the typed target.

Types translate compositionally; ``?`` becomes the recursive sum of the
four tag shapes.  A cast ``<A => B>`` becomes a one-hole target context:
identity on ``? => ?``, functorial wrappers on matching connectives,
roll-plus-injection into the sum when moving a tagged shape to ``?``,
unroll-plus-case (with err on the wrong summand) when projecting out,
composition through the tag for deeper types, and an err thunk when the
tags can never match.
"""

from dataclasses import dataclass
from functools import lru_cache

from . import gradual as g
from . import typed as tt

# the dynamic type's translation: mu a. 1 + (a * a) + ((a + a) + (a -> a)),
# right-nested
_V = tt.TVar(0)
DYN = tt.Mu(tt.Sum(tt.Unit(),
                   tt.Sum(tt.Prod(_V, _V),
                          tt.Sum(tt.Sum(_V, _V), tt.Fun(_V, _V)))))


def dyn_type() -> tt.TType:
    return DYN


@lru_cache(maxsize=None)
def translate_type(a: g.GType) -> tt.TType:
    match a:
        case g.Dyn():
            return DYN
        case g.Unit():
            return tt.Unit()
        case g.Prod(l, r):
            return tt.Prod(translate_type(l), translate_type(r))
        case g.Sum(l, r):
            return tt.Sum(translate_type(l), translate_type(r))
        case g.Fun(d, c):
            return tt.Fun(translate_type(d), translate_type(c))
    raise AssertionError(f"translate_type: {a!r}")


# ------------------------------------------------------- cast contexts

@dataclass(frozen=True)
class CastCtx:
    """A typed term with exactly one hole, casting source to target."""
    body: tt.TTerm
    source: tt.TType
    target: tt.TType

    def __post_init__(self):
        if tt.hole_count(self.body) != 1 or not tt.hole_in_eval_position(self.body):
            raise ValueError("cast context needs exactly one hole, in evaluation position")


def replace_hole(body: tt.TTerm, filler: tt.TTerm) -> tt.TTerm:
    """Substitute filler for the hole.  No index shifting: the hole of a
    well-formed context is never under a binder (it is in evaluation
    position), so plugging cannot capture."""
    match body:
        case tt.Hole():
            return filler
        case tt.Err(_) | tt.Var(_) | tt.UnitVal():
            return body
        case tt.Let(b, t):
            return tt.Let(replace_hole(b, filler), replace_hole(t, filler))
        case tt.Roll(ann, b):
            return tt.Roll(ann, replace_hole(b, filler))
        case tt.Unroll(b):
            return tt.Unroll(replace_hole(b, filler))
        case tt.Pair(l, r):
            return tt.Pair(replace_hole(l, filler), replace_hole(r, filler))
        case tt.MatchPair(s, b):
            return tt.MatchPair(replace_hole(s, filler), replace_hole(b, filler))
        case tt.Inl(ann, b):
            return tt.Inl(ann, replace_hole(b, filler))
        case tt.Inr(ann, b):
            return tt.Inr(ann, replace_hole(b, filler))
        case tt.Case(s, l, r):
            return tt.Case(replace_hole(s, filler), replace_hole(l, filler),
                           replace_hole(r, filler))
        case tt.Lam(dom, b):
            return tt.Lam(dom, replace_hole(b, filler))
        case tt.App(f, a):
            return tt.App(replace_hole(f, filler), replace_hole(a, filler))
    raise AssertionError(f"replace_hole: {body!r}")


def plug(ctx: CastCtx, t: tt.TTerm) -> tt.TTerm:
    return replace_hole(ctx.body, t)


def compose(outer: CastCtx, inner: CastCtx) -> CastCtx:
    """outer after inner: feed inner's result through outer's hole."""
    if inner.target != outer.source:
        raise ValueError("composed cast contexts do not meet at a common type")
    return CastCtx(replace_hole(outer.body, inner.body), inner.source, outer.target)


def hole_ctx(ty: tt.TType) -> CastCtx:
    return CastCtx(tt.Hole(), ty, ty)


# ------------------------------------------------- functorial wrappers

def functor_prod(e1: CastCtx, e2: CastCtx) -> CastCtx:
    """match (x, y) = [.] in (e1[x], e2[y])"""
    rebuilt = tt.Pair(replace_hole(e1.body, tt.Var(1)), replace_hole(e2.body, tt.Var(0)))
    return CastCtx(tt.MatchPair(tt.Hole(), rebuilt),
                   tt.Prod(e1.source, e2.source), tt.Prod(e1.target, e2.target))


def functor_sum(e1: CastCtx, e2: CastCtx) -> CastCtx:
    """case [.] of inl x -> inl e1[x] | inr y -> inr e2[y]"""
    ann = tt.Sum(e1.target, e2.target)
    body = tt.Case(tt.Hole(),
                   tt.Inl(ann, replace_hole(e1.body, tt.Var(0))),
                   tt.Inr(ann, replace_hole(e2.body, tt.Var(0))))
    return CastCtx(body, tt.Sum(e1.source, e2.source), ann)


def functor_fun(e_dom: CastCtx, e_cod: CastCtx) -> CastCtx:
    """let f = [.] in fun a -> e_cod[f e_dom[a]]; note e_dom runs on the
    argument, so the wrapper's domain is e_dom's source."""
    call = tt.App(tt.Var(1), replace_hole(e_dom.body, tt.Var(0)))
    body = tt.Let(tt.Hole(), tt.Lam(e_dom.source, replace_hole(e_cod.body, call)))
    return CastCtx(body, tt.Fun(e_dom.target, e_cod.source),
                   tt.Fun(e_dom.source, e_cod.target))


# ------------------------------------------------- tag embed / project

#: order of the tag summands inside DYN
_TAG_ORDER = (g.Unit(), g.Prod(g.Dyn(), g.Dyn()), g.Sum(g.Dyn(), g.Dyn()),
              g.Fun(g.Dyn(), g.Dyn()))

# the three sum layers of DYN unfolded, outermost first
_S2 = tt.Sum(tt.Sum(DYN, DYN), tt.Fun(DYN, DYN))
_S1 = tt.Sum(tt.Prod(DYN, DYN), _S2)
_S0 = tt.Sum(tt.Unit(), _S1)


def tag_index(tag: g.GType) -> int:
    return _TAG_ORDER.index(tag)


def inject(tag: g.GType, t: tt.TTerm) -> tt.TTerm:
    """Build the tagged summand of unfolded ?, without the roll."""
    match tag_index(tag):
        case 0:
            return tt.Inl(_S0, t)
        case 1:
            return tt.Inr(_S0, tt.Inl(_S1, t))
        case 2:
            return tt.Inr(_S0, tt.Inr(_S1, tt.Inl(_S2, t)))
        case 3:
            return tt.Inr(_S0, tt.Inr(_S1, tt.Inr(_S2, t)))
    raise AssertionError


def embed_tag(tag: g.GType) -> CastCtx:
    return CastCtx(tt.Roll(DYN, inject(tag, tt.Hole())), translate_type(tag), DYN)


def project_tag(tag: g.GType) -> CastCtx:
    """Unroll, then select the wanted summand; every other branch errs."""
    result = translate_type(tag)
    u = tt.Unroll(tt.Hole())
    err = tt.Err(result)
    hit = tt.Var(0)
    match tag_index(tag):
        case 0:
            body = tt.Case(u, hit, err)
        case 1:
            body = tt.Case(u, err, tt.Case(tt.Var(0), hit, err))
        case 2:
            body = tt.Case(u, err, tt.Case(tt.Var(0), err, tt.Case(tt.Var(0), hit, err)))
        case _:
            body = tt.Case(u, err, tt.Case(tt.Var(0), err, tt.Case(tt.Var(0), err, hit)))
    return CastCtx(body, DYN, result)


# --------------------------------------------------- cast translation

@lru_cache(maxsize=None)
def cast_ctx(a: g.GType, b: g.GType) -> CastCtx:
    """The contract for <a => b>, total on all type pairs."""
    match (a, b):
        case (g.Dyn(), g.Dyn()):
            return hole_ctx(DYN)
        case (g.Unit(), g.Unit()):
            return hole_ctx(tt.Unit())
        case (g.Prod(a1, b1), g.Prod(a2, b2)):
            return functor_prod(cast_ctx(a1, a2), cast_ctx(b1, b2))
        case (g.Sum(a1, b1), g.Sum(a2, b2)):
            return functor_sum(cast_ctx(a1, a2), cast_ctx(b1, b2))
        case (g.Fun(a1, b1), g.Fun(a2, b2)):
            return functor_fun(cast_ctx(a2, a1), cast_ctx(b1, b2))
        case (_, g.Dyn()):
            tag = g.floor(a)
            if tag == a:
                return embed_tag(a)
            return compose(cast_ctx(tag, b), cast_ctx(a, tag))
        case (g.Dyn(), _):
            tag = g.floor(b)
            if tag == b:
                return project_tag(b)
            return compose(cast_ctx(tag, b), cast_ctx(a, tag))
    # incompatible tags on both sides: always err, after forcing the value
    assert g.floor(a) != g.floor(b)
    return CastCtx(tt.Let(tt.Hole(), tt.Err(translate_type(b))),
                   translate_type(a), translate_type(b))


def translate_term(t: g.GTerm) -> tt.TTerm:
    """Homomorphic on everything but casts, which plug into their contract."""
    match t:
        case g.Err(ann):
            return tt.Err(translate_type(ann))
        case g.Var(k):
            return tt.Var(k)
        case g.UnitVal():
            return tt.UnitVal()
        case g.Pair(l, r):
            return tt.Pair(translate_term(l), translate_term(r))
        case g.MatchPair(s, _, _, body):
            return tt.MatchPair(translate_term(s), translate_term(body))
        case g.Inl(ann, b):
            return tt.Inl(translate_type(ann), translate_term(b))
        case g.Inr(ann, b):
            return tt.Inr(translate_type(ann), translate_term(b))
        case g.Case(s, _, left, _, right):
            return tt.Case(translate_term(s), translate_term(left), translate_term(right))
        case g.Lam(dom, body):
            return tt.Lam(translate_type(dom), translate_term(body))
        case g.App(f, a):
            return tt.App(translate_term(f), translate_term(a))
        case g.Cast(a, b, body):
            return plug(cast_ctx(a, b), translate_term(body))
    raise AssertionError(f"translate_term: {t!r}")
