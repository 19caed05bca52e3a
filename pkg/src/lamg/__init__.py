"""A workbench for a gradually typed lambda calculus: evaluator, cast
compiler into a typed target with a universal type, precision-derived
embedding-projection pairs, and seeded property suites over all of it."""

__version__ = "0.1.0"

from . import approx, dynamism, elaborate, gradual, propgen, surface, typed

__all__ = [
    "approx", "dynamism", "elaborate", "gradual", "propgen", "surface",
    "typed", "__version__",
]
