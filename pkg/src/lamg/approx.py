"""Observational comparison of programs by bounded evaluation.

Both inputs run in the typed target (gradual inputs are translated
first).  Ground results are compared structurally; functions are
compared extensionally by feeding both sides the same sampled
arguments, up to a bounded nesting depth.  Verdicts are three-valued:
running out of fuel on one side only, or out of sampling depth, yields
Inconclusive rather than a guess.

The one asymmetric notion is error approximation: the left side may
error where the right side converges, but not the other way around.
Equivalence is approximation in both directions on shared samples.
"""

import random
from dataclasses import dataclass, field

from . import dynamism as dyn
from . import elaborate as el
from . import gradual as g
from . import propgen
from . import surface
from . import typed as tt
from .gradual import Errored, FuelExhausted, Value

MAX_FUN_DEPTH = 3


class Verdict:
    pass


@dataclass(frozen=True)
class Holds(Verdict):
    pass


@dataclass(frozen=True, eq=False)
class Fails(Verdict):
    witness: dict


@dataclass(frozen=True)
class Inconclusive(Verdict):
    cause: str  # "fuel" or "sampling"


def untranslate(ty: tt.TType) -> g.GType:
    """Invert the type translation (it is injective on gradual types)."""
    if ty == el.dyn_type():
        return g.Dyn()
    match ty:
        case tt.Unit():
            return g.Unit()
        case tt.Prod(l, r):
            return g.Prod(untranslate(l), untranslate(r))
        case tt.Sum(l, r):
            return g.Sum(untranslate(l), untranslate(r))
        case tt.Fun(d, c):
            return g.Fun(untranslate(d), untranslate(c))
    raise ValueError("type is not in the image of the translation")


def _to_typed(t) -> "tuple[tt.TTerm, tt.TType]":
    if isinstance(t, g.GTerm):
        ty = g.typecheck_gradual((), t)
        return el.translate_term(t), el.translate_type(ty)
    return t, tt.typecheck_typed((), t)


def _prepare(t1, t2):
    left, ty1 = _to_typed(t1)
    right, ty2 = _to_typed(t2)
    if ty1 != ty2:
        raise ValueError("compared programs must have the same type")
    return left, right, ty1


_SAMPLE_CFG = None


def _sample_cfg():
    global _SAMPLE_CFG
    if _SAMPLE_CFG is None:
        _SAMPLE_CFG = propgen.GenConfig(max_type_depth=2, max_term_size=6)
    return _SAMPLE_CFG


@dataclass
class _Comparator:
    fuel: int
    samples: int
    seed: object
    rng: random.Random = field(init=False)
    trail: list = field(init=False, default_factory=list)
    fuel_used: int = field(init=False, default=0)

    def __post_init__(self):
        self.rng = random.Random(f"approx:{self.seed}")

    def run(self, t: tt.TTerm):
        out, steps = tt.eval_typed_counting(t, self.fuel)
        self.fuel_used = max(self.fuel_used, steps)
        return out.outcome

    def fail(self, reason: str, left: tt.TTerm, right: tt.TTerm) -> Fails:
        return Fails({
            "reason": reason,
            "left": surface.print_typed(left),
            "right": surface.print_typed(right),
            "arguments": list(self.trail),
            "seed": str(self.seed),
            "fuel": self.fuel,
            "samples": self.samples,
        })

    def approx(self, left: tt.TTerm, right: tt.TTerm, ty: tt.TType,
               depth: int) -> Verdict:
        o1, o2 = self.run(left), self.run(right)
        match (o1, o2):
            case (Errored(), _):
                return Holds()
            case (Value(v1), Value(v2)):
                return self.value_approx(v1, v2, ty, depth)
            case (Value(_), Errored()):
                return self.fail("left side converged but right side errored",
                                 left, right)
            case (FuelExhausted(_), FuelExhausted(_)):
                return Holds()
        return Inconclusive("fuel")

    def value_approx(self, v1: tt.TTerm, v2: tt.TTerm, ty: tt.TType,
                     depth: int) -> Verdict:
        match ty:
            case tt.Unit():
                return Holds()
            case tt.Prod(a, b):
                first = self.value_approx(v1.left, v2.left, a, depth)
                if isinstance(first, Fails):
                    return first
                second = self.value_approx(v1.right, v2.right, b, depth)
                if isinstance(second, Fails):
                    return second
                for part in (first, second):
                    if isinstance(part, Inconclusive):
                        return part
                return Holds()
            case tt.Sum(a, b):
                match (v1, v2):
                    case (tt.Inl(_, w1), tt.Inl(_, w2)):
                        return self.value_approx(w1, w2, a, depth)
                    case (tt.Inr(_, w1), tt.Inr(_, w2)):
                        return self.value_approx(w1, w2, b, depth)
                return self.fail("sum values use different constructors", v1, v2)
            case tt.Mu(_):
                return self.value_approx(v1.body, v2.body, tt.unfold(ty), depth)
            case tt.Fun(dom, cod):
                if depth >= MAX_FUN_DEPTH:
                    return Inconclusive("sampling")
                undecided = None
                for _ in range(self.samples):
                    arg = self.sample(dom)
                    self.trail.append(surface.print_typed(arg))
                    verdict = self.approx(tt.App(v1, arg), tt.App(v2, arg),
                                          cod, depth + 1)
                    if isinstance(verdict, Fails):
                        return verdict
                    self.trail.pop()
                    if isinstance(verdict, Inconclusive):
                        undecided = verdict
                return undecided or Holds()
        raise AssertionError(f"value_approx at {ty!r}")

    def sample(self, dom: tt.TType) -> tt.TTerm:
        gv = propgen.gen_value(_sample_cfg(), untranslate(dom), rng=self.rng)
        return el.translate_term(gv)


def compare_error_approx(t1, t2, fuel: int = 2000, samples: int = 8,
                         seed=0, stats: "dict | None" = None) -> Verdict:
    """Does t1 error-approximate t2?  Inputs may be gradual or typed."""
    left, right, ty = _prepare(t1, t2)
    cmp = _Comparator(fuel, samples, seed)
    verdict = cmp.approx(left, right, ty, 0)
    if stats is not None:
        stats["fuel_used"] = max(stats.get("fuel_used", 0), cmp.fuel_used)
    return verdict


def compare_equiv(t1, t2, fuel: int = 2000, samples: int = 8,
                  seed=0, stats: "dict | None" = None) -> Verdict:
    """Error approximation in both directions, on the same samples."""
    forward = compare_error_approx(t1, t2, fuel, samples, seed, stats)
    if isinstance(forward, Fails):
        return forward
    backward = compare_error_approx(t2, t1, fuel, samples, seed, stats)
    if isinstance(backward, Fails):
        return backward
    for part in (forward, backward):
        if isinstance(part, Inconclusive):
            return part
    return Holds()


def build_graduality_pair(t1: g.GTerm, t2: g.GTerm,
                          c: dyn.DynDeriv) -> "tuple[tt.TTerm, tt.TTerm]":
    """Wrap the less-dynamic t1 in the boundary cast induced by c and
    translate both sides, ready for an error-approximation comparison."""
    b1, b2 = dyn.endpoints(c)
    if g.typecheck_gradual((), t1) != b1 or g.typecheck_gradual((), t2) != b2:
        raise ValueError("terms do not inhabit the derivation endpoints")
    return el.translate_term(g.Cast(b1, b2, t1)), el.translate_term(t2)
