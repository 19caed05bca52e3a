"""Seeded random generation of types, terms, and values.

Generation is directed by the typing rules, so every produced term
typechecks at its requested type by construction.  All randomness flows
through explicitly-seeded ``random.Random`` instances (string seeds hash
with sha512, so corpora are stable across platforms and runs).

The precision mutator rewrites annotation sites of a term to less
dynamic types and keeps only mutants that still typecheck and are
related to the original; it feeds the graduality suite.
"""

import random
from dataclasses import dataclass

from . import dynamism as dyn
from . import gradual as g


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_type_depth: int = 2
    max_term_size: int = 14
    cast_probability: float = 0.35
    fuel: int = 2000
    samples: int = 8


# ---------------------------------------------------------- types

def _type(rng: random.Random, depth: int, allow_dyn: bool = True) -> g.GType:
    kinds = ["unit", "dyn"] if allow_dyn else ["unit"]
    if depth > 0:
        kinds = kinds + ["prod", "sum", "fun"]
    match rng.choice(kinds):
        case "unit":
            return g.Unit()
        case "dyn":
            return g.Dyn()
        case "prod":
            return g.Prod(_type(rng, depth - 1, allow_dyn),
                          _type(rng, depth - 1, allow_dyn))
        case "sum":
            return g.Sum(_type(rng, depth - 1, allow_dyn),
                         _type(rng, depth - 1, allow_dyn))
        case "fun":
            return g.Fun(_type(rng, depth - 1, allow_dyn),
                         _type(rng, depth - 1, allow_dyn))
    raise AssertionError


def gen_type(cfg: GenConfig, rng: "random.Random | None" = None) -> g.GType:
    rng = rng or random.Random(f"{cfg.seed}:type")
    return _type(rng, cfg.max_type_depth)


def _related(rng: random.Random, b: g.GType, depth: int) -> g.GType:
    """A type below b: some ? leaves refined into arbitrary types."""
    match b:
        case g.Dyn():
            if depth <= 0 or rng.random() < 0.5:
                return g.Dyn()
            return _type(rng, depth)
        case g.Unit():
            return g.Unit()
        case g.Prod(l, r):
            return g.Prod(_related(rng, l, depth - 1), _related(rng, r, depth - 1))
        case g.Sum(l, r):
            return g.Sum(_related(rng, l, depth - 1), _related(rng, r, depth - 1))
        case g.Fun(d, c):
            return g.Fun(_related(rng, d, depth - 1), _related(rng, c, depth - 1))
    raise AssertionError


def gen_related_type(cfg: GenConfig, b: g.GType,
                     rng: "random.Random | None" = None) -> g.GType:
    """A type less dynamic than (below) b."""
    rng = rng or random.Random(f"{cfg.seed}:related")
    return _related(rng, b, cfg.max_type_depth)


def _more_dynamic(rng: random.Random, a: g.GType) -> g.GType:
    """A type above a: some subtrees collapsed to ?."""
    if rng.random() < 0.3:
        return g.Dyn()
    match a:
        case g.Dyn() | g.Unit():
            return a
        case g.Prod(l, r):
            return g.Prod(_more_dynamic(rng, l), _more_dynamic(rng, r))
        case g.Sum(l, r):
            return g.Sum(_more_dynamic(rng, l), _more_dynamic(rng, r))
        case g.Fun(d, c):
            return g.Fun(_more_dynamic(rng, d), _more_dynamic(rng, c))
    raise AssertionError


# ---------------------------------------------------------- terms

def _fallback(target: g.GType) -> g.GTerm:
    """The canonical inhabitant, for when the size budget runs out."""
    match target:
        case g.Unit():
            return g.UnitVal()
        case g.Dyn():
            return g.Cast(g.Unit(), g.Dyn(), g.UnitVal())
        case g.Prod(l, r):
            return g.Pair(_fallback(l), _fallback(r))
        case g.Sum(l, _):
            return g.Inl(target, _fallback(l))
        case g.Fun(d, c):
            return g.Lam(d, _fallback(c))
    raise AssertionError


def _pivot(cfg: GenConfig, rng: random.Random) -> g.GType:
    # with casts disabled, avoid ? so no tag cast is ever forced
    return _type(rng, min(cfg.max_type_depth, 2), cfg.cast_probability > 0)


def _term(cfg: GenConfig, rng: random.Random, env, target: g.GType,
          size: int) -> g.GTerm:
    if size <= 1:
        return _fallback(target)
    if rng.random() < cfg.cast_probability:
        src = (gen_related_type(cfg, target, rng=rng) if rng.random() < 0.5
               else _more_dynamic(rng, target))
        if src != target:
            return g.Cast(src, target, _term(cfg, rng, env, src, size - 1))
    choices = ["intro", "intro"]
    hits = [i for i, ty in enumerate(env) if ty == target]
    if hits:
        choices += ["var", "var"]
    if size >= 4:
        choices += ["app", "case", "match"]
    match rng.choice(choices):
        case "var":
            return g.Var(rng.choice(hits))
        case "app":
            d = _pivot(cfg, rng)
            half = size // 2
            return g.App(_term(cfg, rng, env, g.Fun(d, target), half),
                         _term(cfg, rng, env, d, half))
        case "case":
            s = g.Sum(_pivot(cfg, rng), _pivot(cfg, rng))
            third = max(1, size // 3)
            return g.Case(_term(cfg, rng, env, s, third),
                          s.left, _term(cfg, rng, (s.left,) + env, target, third),
                          s.right, _term(cfg, rng, (s.right,) + env, target, third))
        case "match":
            p = g.Prod(_pivot(cfg, rng), _pivot(cfg, rng))
            half = size // 2
            return g.MatchPair(_term(cfg, rng, env, p, half), p.left, p.right,
                               _term(cfg, rng, (p.right, p.left) + env, target, half))
    match target:
        case g.Unit():
            return g.UnitVal()
        case g.Dyn():
            tag = g.TAGS[rng.randrange(len(g.TAGS))]
            return g.Cast(tag, g.Dyn(), _term(cfg, rng, env, tag, size - 1))
        case g.Prod(l, r):
            half = size // 2
            return g.Pair(_term(cfg, rng, env, l, half),
                          _term(cfg, rng, env, r, half))
        case g.Sum(l, r):
            if rng.random() < 0.5:
                return g.Inl(target, _term(cfg, rng, env, l, size - 1))
            return g.Inr(target, _term(cfg, rng, env, r, size - 1))
        case g.Fun(d, c):
            return g.Lam(d, _term(cfg, rng, (d,) + env, c, size - 1))
    raise AssertionError


def gen_term(cfg: GenConfig, env, target: g.GType,
             rng: "random.Random | None" = None) -> g.GTerm:
    """A term of the requested type under env (innermost binding first).

    Casts are inserted with cfg.cast_probability, pivoting through a
    related type in either direction.  A target mentioning ? still
    forces the tag casts needed to inhabit it.
    """
    rng = rng or random.Random(f"{cfg.seed}:term")
    return _term(cfg, rng, tuple(env), target, cfg.max_term_size)


def _value(cfg: GenConfig, rng: random.Random, target: g.GType,
           size: int) -> g.GTerm:
    if size <= 0:
        return _fallback(target)
    match target:
        case g.Unit():
            return g.UnitVal()
        case g.Dyn():
            tag = g.TAGS[rng.randrange(len(g.TAGS))]
            return g.Cast(tag, g.Dyn(), _value(cfg, rng, tag, size - 1))
        case g.Prod(l, r):
            return g.Pair(_value(cfg, rng, l, size - 1),
                          _value(cfg, rng, r, size - 1))
        case g.Sum(l, r):
            if rng.random() < 0.5:
                return g.Inl(target, _value(cfg, rng, l, size - 1))
            return g.Inr(target, _value(cfg, rng, r, size - 1))
        case g.Fun(d, c):
            return g.Lam(d, _term(cfg, rng, (d,), c, size))
    raise AssertionError


def gen_value(cfg: GenConfig, target: g.GType,
              rng: "random.Random | None" = None) -> g.GTerm:
    """A closed value of the requested type (function bodies may be
    arbitrary terms, including ones that error when called)."""
    rng = rng or random.Random(f"{cfg.seed}:value")
    return _value(cfg, rng, target, cfg.max_term_size)


# ------------------------------------------------------- mutation

def _map_anns(t: g.GTerm, rewrite):
    """Apply rewrite(site_index, kind, type) over the mutable annotation
    sites (lambda domains, cast endpoints, injection ascriptions) in
    preorder.  Returns the rewritten term and the site count."""
    cell = [0]

    def ann(kind, ty):
        k = cell[0]
        cell[0] += 1
        return rewrite(k, kind, ty)

    def walk(t):
        match t:
            case g.Var(_) | g.UnitVal() | g.Err(_):
                return t
            case g.Pair(l, r):
                return g.Pair(walk(l), walk(r))
            case g.MatchPair(s, la, ra, b):
                return g.MatchPair(walk(s), la, ra, walk(b))
            case g.Inl(a, b):
                return g.Inl(ann("inj", a), walk(b))
            case g.Inr(a, b):
                return g.Inr(ann("inj", a), walk(b))
            case g.Case(s, la, l, ra, r):
                return g.Case(walk(s), la, walk(l), ra, walk(r))
            case g.Lam(d, b):
                return g.Lam(ann("dom", d), walk(b))
            case g.App(fn, a):
                return g.App(walk(fn), walk(a))
            case g.Cast(src, tgt, b):
                return g.Cast(ann("src", src), ann("tgt", tgt), walk(b))
        raise AssertionError(f"_map_anns: {t!r}")

    out = walk(t)
    return out, cell[0]


def _has_dyn(ty: g.GType) -> bool:
    match ty:
        case g.Dyn():
            return True
        case g.Unit():
            return False
        case g.Prod(l, r) | g.Sum(l, r) | g.Fun(l, r):
            return _has_dyn(l) or _has_dyn(r)
    raise AssertionError


def _lower(rng: random.Random, ty: g.GType) -> g.GType:
    for _ in range(4):
        cand = _related(rng, ty, 2)
        if cand != ty:
            return cand
    return ty


# how often a lone rewrite at each site kind survives the typechecker
_SITE_WEIGHT = {"tgt": 4.0, "inj": 3.0, "dom": 2.0, "src": 1.0}


def mutate_less_dynamic(cfg: GenConfig, t2: g.GTerm,
                        rng: "random.Random | None" = None,
                        attempts: int = 8) -> "list[tuple[g.GTerm, g.GTerm]]":
    """Precision-lowering mutants of t2: pairs (t1, t2) with t1 a mutant
    that typechecks and sits below t2 in term precision.

    Rejection sampling: each attempt rewrites one to three annotation
    sites that mention ? (others cannot move down); mutants that break
    typing, lose the relation, or change nothing are dropped.  Binder
    annotations on case and match are left alone — the typechecker pins
    them to the scrutinee exactly, so a lone rewrite there can never
    survive the filter.
    """
    rng = rng or random.Random(f"{cfg.seed}:mutate")
    sites = []
    _map_anns(t2, lambda i, kind, ty: sites.append((kind, ty)) or ty)
    cands = [i for i, (_, ty) in enumerate(sites) if _has_dyn(ty)]
    if not cands:
        return []
    weights = [_SITE_WEIGHT[sites[i][0]] for i in cands]
    out = []
    for _ in range(attempts):
        want = min(len(cands), rng.randint(1, 3))
        picks = set()
        while len(picks) < want:
            picks.add(rng.choices(cands, weights)[0])
        t1, _ = _map_anns(
            t2, lambda i, kind, ty: _lower(rng, ty) if i in picks else ty)
        if t1 == t2:
            continue
        try:
            g.typecheck_gradual((), t1)
        except g.TypeCheckError:
            continue
        if dyn.check_term_dynamism((), (), t1, t2).related:
            out.append((t1, t2))
    return out
