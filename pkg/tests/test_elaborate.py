"""Cast compilation tests: the dynamic type, cast contexts, translation."""

import itertools
import random
from pathlib import Path

import pytest

from lamg import elaborate as el
from lamg import gradual as g
from lamg import propgen
from lamg import surface
from lamg import typed as tt

GOLDEN = Path(__file__).parent / "golden"

# Every gradual type of depth <= 2 over the 4-type leaf pool, plus the
# leaves themselves.  Small but hits every connective pairing.
_LEAVES = [g.Dyn(), g.Unit()]
_DEPTH1 = [c(a, b)
           for c in (g.Prod, g.Sum, g.Fun)
           for a in _LEAVES for b in _LEAVES]
TYPES = _LEAVES + _DEPTH1 + [c(a, b)
                             for c in (g.Prod, g.Sum, g.Fun)
                             for a, b in itertools.product(_DEPTH1, _LEAVES)]


def test_dyn_type_matches_golden():
    expect = (GOLDEN / "dyn_type.txt").read_text().strip()
    assert surface.print_typed_type(el.dyn_type()) == expect


def test_dyn_type_unfolds_to_tag_sum():
    body = tt.unfold(el.dyn_type())
    d = el.dyn_type()
    assert body == tt.Sum(tt.Unit(),
                          tt.Sum(tt.Prod(d, d),
                                 tt.Sum(tt.Sum(d, d), tt.Fun(d, d))))


@pytest.mark.parametrize("ty", TYPES, ids=surface.print_gradual_type)
def test_translate_type_closed(ty):
    assert tt.type_closed(el.translate_type(ty))


def test_translate_type_on_static_types_is_structural():
    ty = g.Fun(g.Prod(g.Unit(), g.Unit()), g.Sum(g.Unit(), g.Unit()))
    assert el.translate_type(ty) == tt.Fun(tt.Prod(tt.Unit(), tt.Unit()),
                                           tt.Sum(tt.Unit(), tt.Unit()))


# ------------------------------------------------------- cast contexts

def test_hole_ctx_is_identity():
    ctx = el.hole_ctx(tt.Unit())
    assert el.plug(ctx, tt.UnitVal()) == tt.UnitVal()


def test_ctx_requires_exactly_one_hole():
    with pytest.raises(ValueError):
        el.CastCtx(tt.UnitVal(), tt.Unit(), tt.Unit())
    with pytest.raises(ValueError):
        el.CastCtx(tt.Pair(tt.Hole(), tt.Hole()), tt.Unit(),
                   tt.Prod(tt.Unit(), tt.Unit()))


def test_hole_must_sit_in_eval_position():
    # Under a binder the hole is no longer a plain evaluation context.
    with pytest.raises(ValueError):
        el.CastCtx(tt.Lam(tt.Unit(), tt.Hole()), tt.Unit(),
                   tt.Fun(tt.Unit(), tt.Unit()))


def test_compose_checks_endpoints():
    u = el.hole_ctx(tt.Unit())
    p = el.hole_ctx(tt.Prod(tt.Unit(), tt.Unit()))
    with pytest.raises(ValueError):
        el.compose(u, p)


def test_compose_plugs_inner_into_outer():
    inner = el.CastCtx(tt.Pair(tt.Hole(), tt.UnitVal()), tt.Unit(),
                       tt.Prod(tt.Unit(), tt.Unit()))
    outer = el.CastCtx(tt.MatchPair(tt.Hole(), tt.Var(1)),
                       tt.Prod(tt.Unit(), tt.Unit()), tt.Unit())
    c = el.compose(outer, inner)
    assert c.source == tt.Unit() and c.target == tt.Unit()
    assert el.plug(c, tt.UnitVal()) == tt.MatchPair(
        tt.Pair(tt.UnitVal(), tt.UnitVal()), tt.Var(1))


def _check_cast_ctx(src, tgt):
    ctx = el.cast_ctx(src, tgt)
    assert ctx.source == el.translate_type(src)
    assert ctx.target == el.translate_type(tgt)
    plugged = el.plug(ctx, tt.Var(0))
    got = tt.typecheck_typed((ctx.source,), plugged)
    assert got == ctx.target


@pytest.mark.parametrize("src,tgt",
                         list(itertools.product(_LEAVES + _DEPTH1, repeat=2)),
                         ids=lambda v: surface.print_gradual_type(v))
def test_cast_ctx_well_typed_shallow(src, tgt):
    _check_cast_ctx(src, tgt)


def test_cast_ctx_well_typed_deeper_sample():
    rng = random.Random("cast-ctx-pairs")
    for _ in range(200):
        _check_cast_ctx(rng.choice(TYPES), rng.choice(TYPES))


def test_identity_casts_at_base_types_are_the_hole():
    for ty in (g.Unit(), g.Dyn()):
        assert el.cast_ctx(ty, ty).body == tt.Hole()


def test_identity_casts_on_composites_act_as_identity():
    ty = g.Prod(g.Unit(), g.Sum(g.Unit(), g.Unit()))
    ctx = el.cast_ctx(ty, ty)
    v = el.translate_term(
        surface.parse_gradual("((), inr () : 1 + 1)"))
    out = tt.eval_typed(el.plug(ctx, v), fuel=50)
    assert out.outcome == tt.Value(v)


def test_tag_embedding_shape():
    # 1 => ? wraps in the unit tag, the leftmost summand.
    ctx = el.cast_ctx(g.Unit(), g.Dyn())
    d = tt.unfold(el.dyn_type())
    assert el.plug(ctx, tt.UnitVal()) == tt.Roll(
        el.dyn_type(), tt.Inl(d, tt.UnitVal()))


def test_tag_projection_shape():
    # ? => 1 unrolls and signals ℧ in every non-unit arm.
    ctx = el.cast_ctx(g.Dyn(), g.Unit())
    t = el.plug(ctx, tt.Var(0))
    got = tt.typecheck_typed((el.dyn_type(),), t)
    assert got == tt.Unit()
    # projecting an embedded unit must hit the success arm
    v = el.plug(el.cast_ctx(g.Unit(), g.Dyn()), tt.UnitVal())
    out = tt.eval_typed(el.plug(ctx, v), fuel=50)
    assert out.outcome == tt.Value(tt.UnitVal())


def test_fun_cast_eta_expands():
    ctx = el.cast_ctx(g.Fun(g.Unit(), g.Unit()), g.Fun(g.Dyn(), g.Dyn()))
    t = el.plug(ctx, tt.Var(0))
    assert isinstance(t, tt.Let)
    assert isinstance(t.body, tt.Lam)


# -------------------------------------------------------- translation

def test_translate_term_examples():
    t = surface.parse_gradual("<1 => ?> ()")
    tr = el.translate_term(t)
    d = tt.unfold(el.dyn_type())
    assert tr == tt.Roll(el.dyn_type(), tt.Inl(d, tt.UnitVal()))

    t = surface.parse_gradual("err : 1")
    assert el.translate_term(t) == tt.Err(tt.Unit())


def test_translate_preserves_typing():
    cfg = propgen.GenConfig(seed=23, max_term_size=16)
    rng = random.Random("elab-typing")
    for _ in range(150):
        ty = propgen.gen_type(cfg, rng=rng)
        t = propgen.gen_term(cfg, (), ty, rng=rng)
        assert g.typecheck_gradual((), t) == ty
        tr = el.translate_term(t)
        assert tt.typecheck_typed((), tr) == el.translate_type(ty)


def test_translate_values_stay_values():
    cfg = propgen.GenConfig(seed=5)
    rng = random.Random("elab-values")
    for _ in range(100):
        ty = propgen.gen_type(cfg, rng=rng)
        v = propgen.gen_value(cfg, ty, rng=rng)
        tr = el.translate_term(v)
        assert tt.is_value(tr), surface.print_gradual(v)
