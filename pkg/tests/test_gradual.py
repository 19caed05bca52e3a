"""Unit tests for the gradual language: types, values, typing, stepping."""

import pytest

from lamg import gradual as g

D, U = g.Dyn(), g.Unit()
UNIT = g.UnitVal()


def lam_id(dom):
    return g.Lam(dom, g.Var(0))


# ------------------------------------------------------------ types

def test_floor_collapses_one_level():
    assert g.floor(U) == U
    assert g.floor(g.Prod(U, g.Fun(U, U))) == g.Prod(D, D)
    assert g.floor(g.Sum(D, U)) == g.Sum(D, D)
    assert g.floor(g.Fun(U, U)) == g.Fun(D, D)


def test_floor_undefined_at_dyn():
    with pytest.raises(ValueError):
        g.floor(D)


def test_tags():
    assert len(g.TAGS) == 4
    for tag in g.TAGS:
        assert g.is_tag(tag)
        assert g.floor(tag) == tag
    assert not g.is_tag(D)
    assert not g.is_tag(g.Prod(U, D))


# ----------------------------------------------------------- values

@pytest.mark.parametrize("v", [
    UNIT,
    g.Pair(UNIT, UNIT),
    g.Inl(g.Sum(U, U), UNIT),
    g.Inr(g.Sum(U, D), g.Cast(U, D, UNIT)),
    lam_id(U),
    g.Cast(U, D, UNIT),
    g.Cast(g.Fun(D, D), D, lam_id(D)),
])
def test_values(v):
    assert g.is_value(v)


@pytest.mark.parametrize("t", [
    g.Var(0),  # open, and variables are not gradual values
    g.App(lam_id(U), UNIT),
    g.Cast(D, U, g.Cast(U, D, UNIT)),      # projection is a redex
    g.Cast(g.Prod(U, U), D, g.Pair(UNIT, UNIT)),  # untagged injection
    g.Pair(g.App(lam_id(U), UNIT), UNIT),
    g.Err(U),
])
def test_non_values(t):
    assert not g.is_value(t)


# ----------------------------------------------------------- typing

def test_typecheck_basics():
    assert g.typecheck_gradual((), UNIT) == U
    assert g.typecheck_gradual((), lam_id(D)) == g.Fun(D, D)
    assert g.typecheck_gradual((U,), g.Var(0)) == U
    assert g.typecheck_gradual((), g.Err(g.Prod(U, U))) == g.Prod(U, U)
    assert g.typecheck_gradual((), g.Cast(U, D, UNIT)) == D


def test_typecheck_app_needs_exact_domain():
    good = g.App(lam_id(U), UNIT)
    assert g.typecheck_gradual((), good) == U
    bad = g.App(lam_id(U), g.Cast(U, D, UNIT))
    with pytest.raises(g.TypeCheckError):
        g.typecheck_gradual((), bad)


def test_typecheck_cast_source_must_match_body():
    with pytest.raises(g.TypeCheckError):
        g.typecheck_gradual((), g.Cast(g.Prod(U, U), D, UNIT))


def test_typecheck_case_branches_must_join():
    scrut = g.Inl(g.Sum(U, U), UNIT)
    bad = g.Case(scrut, U, UNIT, U, g.Cast(U, D, g.Var(0)))
    with pytest.raises(g.TypeCheckError):
        g.typecheck_gradual((), bad)


def test_typecheck_binder_annotations_are_pinned():
    scrut = g.Pair(UNIT, g.Cast(U, D, UNIT))
    good = g.MatchPair(scrut, U, D, g.Var(1))
    assert g.typecheck_gradual((), good) == U
    bad = g.MatchPair(scrut, U, U, g.Var(1))
    with pytest.raises(g.TypeCheckError):
        g.typecheck_gradual((), bad)


def test_typecheck_error_names_path():
    t = g.Pair(UNIT, g.App(UNIT, UNIT))
    with pytest.raises(g.TypeCheckError) as exc:
        g.typecheck_gradual((), t)
    assert "at " in str(exc.value)


def test_unbound_variable():
    with pytest.raises(g.TypeCheckError):
        g.typecheck_gradual((U,), g.Var(1))


# --------------------------------------------------------- stepping

def step(t):
    return g.step_rule(t)


def test_beta():
    t2, rule = step(g.App(lam_id(U), UNIT))
    assert (t2, rule) == (UNIT, "beta")


def test_split_pair_binder_order():
    # body sees the left component one binder out, the right innermost
    t = g.MatchPair(g.Pair(UNIT, g.Cast(U, D, UNIT)), U, D, g.Var(0))
    t2, rule = step(t)
    assert rule == "split-pair"
    assert t2 == g.Cast(U, D, UNIT)


def test_case_rules():
    inl = g.Case(g.Inl(g.Sum(U, U), UNIT), U, g.Var(0), U, g.Err(U))
    assert step(inl) == (UNIT, "case-inl")
    inr = g.Case(g.Inr(g.Sum(U, U), UNIT), U, g.Err(U), U, g.Var(0))
    assert step(inr) == (UNIT, "case-inr")


@pytest.mark.parametrize("t,rule,expect", [
    (g.Cast(D, D, g.Cast(U, D, UNIT)), "cast-dyn-id", g.Cast(U, D, UNIT)),
    (g.Cast(U, U, UNIT), "cast-unit-id", UNIT),
    (g.Cast(D, U, g.Cast(U, D, UNIT)), "cast-tag-hit", UNIT),
    (g.Cast(g.Prod(U, U), D, g.Pair(UNIT, UNIT)), "cast-tag-up",
     g.Cast(g.Prod(D, D), D, g.Cast(g.Prod(U, U), g.Prod(D, D),
                                    g.Pair(UNIT, UNIT)))),
    (g.Cast(g.Prod(U, U), g.Prod(D, D), g.Pair(UNIT, UNIT)), "cast-pair",
     g.Pair(g.Cast(U, D, UNIT), g.Cast(U, D, UNIT))),
])
def test_cast_steps(t, rule, expect):
    assert step(t) == (expect, rule)


def test_cast_tag_down_shape():
    v = g.Cast(g.Prod(D, D), D, g.Pair(g.Cast(U, D, UNIT), g.Cast(U, D, UNIT)))
    t2, rule = step(g.Cast(D, g.Prod(U, U), v))
    assert rule == "cast-tag-down"
    assert t2 == g.Cast(g.Prod(D, D), g.Prod(U, U), g.Cast(D, g.Prod(D, D), v))


def test_cast_sum_reinjects_at_target_annotation():
    src, tgt = g.Sum(U, U), g.Sum(D, D)
    t2, rule = step(g.Cast(src, tgt, g.Inl(src, UNIT)))
    assert rule == "cast-sum-inl"
    assert t2 == g.Inl(tgt, g.Cast(U, D, UNIT))
    t2, rule = step(g.Cast(src, tgt, g.Inr(src, UNIT)))
    assert rule == "cast-sum-inr"
    assert t2 == g.Inr(tgt, g.Cast(U, D, UNIT))


def test_cast_fun_wraps():
    f = lam_id(U)
    t2, rule = step(g.Cast(g.Fun(U, U), g.Fun(D, D), f))
    assert rule == "cast-fun"
    assert t2 == g.Lam(D, g.Cast(U, D, g.App(f, g.Cast(D, U, g.Var(0)))))


def test_cast_tag_miss_halts_with_program_type():
    prog = g.Pair(g.Cast(D, U, g.Cast(g.Fun(D, D), D, lam_id(D))), UNIT)
    t2, rule = step(prog)
    assert rule == "cast-tag-miss"
    assert t2 == g.Err(g.Prod(U, U))


def test_cast_mismatch_halts():
    t2, rule = step(g.Cast(U, g.Fun(U, U), UNIT))
    assert rule == "cast-mismatch"
    assert t2 == g.Err(g.Fun(U, U))


def test_err_halt_collapses_context_in_one_step():
    prog = g.App(lam_id(U), g.Err(U))
    assert step(prog) == (g.Err(U), "err-halt")


def test_terminal_terms_do_not_step():
    assert step(UNIT) is None
    assert step(g.Err(U)) is None
    assert step(g.Cast(U, D, UNIT)) is None


def test_step_is_deterministic_function():
    t = g.App(g.Cast(g.Fun(U, U), g.Fun(U, U), lam_id(U)), UNIT)
    assert step(t) == step(t)


# -------------------------------------------------------- evaluator

def test_eval_value():
    out = g.eval_gradual(g.App(lam_id(U), UNIT), 10)
    assert out == g.Value(UNIT)


def test_eval_error():
    out = g.eval_gradual(g.Cast(U, g.Prod(U, U), UNIT), 10)
    assert isinstance(out, g.Errored)


def test_eval_fuel():
    omega_body = g.App(g.Cast(D, g.Fun(D, D), g.Var(0)), g.Var(0))
    d = g.Lam(D, omega_body)
    omega = g.App(d, g.Cast(g.Fun(D, D), D, d))
    out, steps = g.eval_gradual_counting(omega, 50)
    assert isinstance(out, g.FuelExhausted)
    assert steps == 50
    assert not g.is_value(out.last)


def test_eval_counting_counts_steps():
    out, steps = g.eval_gradual_counting(g.App(lam_id(U), UNIT), 10)
    assert out == g.Value(UNIT)
    assert steps == 1


# ------------------------------------------------- de Bruijn plumbing

def test_shift_below_cutoff_fixed():
    t = g.Lam(U, g.Var(0))
    assert g.shift(t, 3) == t


def test_shift_free_variables():
    assert g.shift(g.Var(0), 2) == g.Var(2)
    assert g.shift(g.Lam(U, g.Var(1)), 2) == g.Lam(U, g.Var(3))


def test_subst_top_closes_redex():
    body = g.Pair(g.Var(0), g.Var(0))
    assert g.subst_top(body, UNIT) == g.Pair(UNIT, UNIT)


def test_subst_top2_order():
    # match binds left then right; Var(1) is the left component
    body = g.Pair(g.Var(1), g.Var(0))
    out = g.subst_top2(body, UNIT, g.Cast(U, D, UNIT))
    assert out == g.Pair(UNIT, g.Cast(U, D, UNIT))
