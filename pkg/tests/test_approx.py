"""Bounded observational comparison: verdicts, sampling, witnesses."""

import random

import pytest

from lamg import approx
from lamg import dynamism as dy
from lamg import elaborate as el
from lamg import gradual as g
from lamg import propgen
from lamg import surface
from lamg import typed as tt


def _parse(src):
    return surface.parse_gradual(src)


OMEGA = ("(fun (x : ?) -> (<? => ? -> ?> x) x)"
         " (<? -> ? => ?> (fun (x : ?) -> (<? => ? -> ?> x) x))")


# -------------------------------------------------------- untranslate

def test_untranslate_inverts_translation():
    cfg = propgen.GenConfig(seed=2, max_type_depth=3)
    rng = random.Random("untranslate")
    for _ in range(200):
        ty = propgen.gen_type(cfg, rng=rng)
        assert approx.untranslate(el.translate_type(ty)) == ty


def test_untranslate_rejects_foreign_types():
    for ty in (tt.TVar(0),
               tt.Mu(tt.Unit()),
               tt.Prod(tt.Unit(), tt.TVar(0)),
               tt.Mu(tt.Sum(tt.Unit(), tt.TVar(0)))):
        with pytest.raises(ValueError):
            approx.untranslate(ty)


# ----------------------------------------------------- verdict matrix

def test_equal_ground_values_hold():
    v = approx.compare_error_approx(_parse("((), inl () : 1 + 1)"),
                                    _parse("((), inl () : 1 + 1)"))
    assert isinstance(v, approx.Holds)


def test_error_on_the_left_holds():
    v = approx.compare_error_approx(_parse("err : 1"), _parse("()"))
    assert isinstance(v, approx.Holds)


def test_error_on_the_right_fails_with_witness():
    v = approx.compare_error_approx(_parse("()"), _parse("err : 1"))
    assert isinstance(v, approx.Fails)
    for key in ("reason", "left", "right", "arguments", "seed",
                "fuel", "samples"):
        assert key in v.witness
    assert "errored" in v.witness["reason"]


def test_distinct_sum_constructors_fail():
    v = approx.compare_error_approx(_parse("inl () : 1 + 1"),
                                    _parse("inr () : 1 + 1"))
    assert isinstance(v, approx.Fails)


def test_one_sided_fuel_is_inconclusive():
    v = approx.compare_error_approx(_parse(OMEGA), _parse("<1 => ?> ()"),
                                    fuel=100)
    assert v == approx.Inconclusive("fuel")


def test_mutual_fuel_exhaustion_holds():
    v = approx.compare_error_approx(_parse(OMEGA), _parse(OMEGA), fuel=100)
    assert isinstance(v, approx.Holds)


def test_functions_are_compared_on_sampled_arguments():
    total = _parse("fun (x : 1 + 1) -> ()")
    partial = _parse("case inl () : 1 + 1 of"
                     " inl (u : 1) -> fun (x : 1 + 1) ->"
                     " case x of inl (a : 1) -> () | inr (b : 1) -> err : 1"
                     " | inr (u : 1) -> fun (x : 1 + 1) -> ()")
    # partial errors on inr inputs, so it approximates total ...
    assert isinstance(approx.compare_error_approx(partial, total), approx.Holds)
    # ... but not the other way around, and the witness keeps the argument
    v = approx.compare_error_approx(total, partial)
    assert isinstance(v, approx.Fails)
    assert any("inr" in a for a in v.witness["arguments"])


def test_deep_function_nesting_is_a_sampling_inconclusive():
    t = _parse("fun (a : 1) -> fun (b : 1) -> fun (c : 1) -> fun (d : 1) -> ()")
    v = approx.compare_error_approx(t, t)
    assert v == approx.Inconclusive("sampling")


def test_function_depth_below_the_cap_still_decides():
    t = _parse("fun (a : 1) -> fun (b : 1) -> fun (c : 1) -> ()")
    assert isinstance(approx.compare_error_approx(t, t), approx.Holds)


def test_mismatched_types_are_rejected():
    with pytest.raises(ValueError):
        approx.compare_error_approx(_parse("()"), _parse("((), ())"))


def test_typed_inputs_are_accepted_directly():
    v = approx.compare_error_approx(tt.UnitVal(), tt.UnitVal())
    assert isinstance(v, approx.Holds)


# ------------------------------------------------------- equivalence

def test_equiv_requires_both_directions():
    err, val = _parse("err : 1"), _parse("()")
    assert isinstance(approx.compare_error_approx(err, val), approx.Holds)
    v = approx.compare_equiv(err, val)
    assert isinstance(v, approx.Fails)


def test_equiv_holds_on_equal_programs():
    t = _parse("(fun (x : 1) -> (x, x)) ()")
    assert isinstance(approx.compare_equiv(t, _parse("((), ())")),
                      approx.Holds)


# ------------------------------------------------------ determinism

def test_same_seed_reproduces_the_witness():
    total = _parse("fun (x : 1 + 1) -> ()")
    partial = _parse("fun (x : 1 + 1) ->"
                     " case x of inl (a : 1) -> () | inr (b : 1) -> err : 1")
    v1 = approx.compare_error_approx(total, partial, seed=9)
    v2 = approx.compare_error_approx(total, partial, seed=9)
    assert isinstance(v1, approx.Fails) and isinstance(v2, approx.Fails)
    assert v1.witness == v2.witness


def test_stats_report_fuel_used():
    stats = {}
    approx.compare_error_approx(_parse("(fun (x : 1) -> x) ()"),
                                _parse("()"), stats=stats)
    assert stats["fuel_used"] >= 1
    stats2 = {}
    approx.compare_error_approx(_parse("()"), _parse("()"), stats=stats2)
    assert stats2["fuel_used"] == 0


# ------------------------------------------------- graduality pairs

def test_build_graduality_pair_casts_the_left_side():
    c = dy.check_dynamism(g.Unit(), g.Dyn())
    left, right = approx.build_graduality_pair(_parse("()"),
                                               _parse("<1 => ?> ()"), c)
    assert tt.typecheck_typed((), left) == el.dyn_type()
    assert tt.typecheck_typed((), right) == el.dyn_type()
    assert isinstance(approx.compare_error_approx(left, right), approx.Holds)


def test_build_graduality_pair_checks_endpoints():
    c = dy.check_dynamism(g.Dyn(), g.Dyn())
    with pytest.raises(ValueError):
        approx.build_graduality_pair(_parse("()"), _parse("<1 => ?> ()"), c)
    c2 = dy.check_dynamism(g.Unit(), g.Dyn())
    with pytest.raises(ValueError):
        approx.build_graduality_pair(_parse("()"), _parse("()"), c2)
