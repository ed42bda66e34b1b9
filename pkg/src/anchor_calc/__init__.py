"""Evaluation and verification of unitary anchored planar algebras."""
from . import adjunction, apa, catmodel, delta, lambda_, tangle
from .apa import APAInstance, builtin, check_axioms, gram
from .delta import Delta
from .lambda_ import lambda_apa, roundtrip_check

__all__ = ["APAInstance", "Delta", "adjunction", "apa", "builtin", "catmodel", "check_axioms", "delta",
           "gram", "lambda_", "lambda_apa", "roundtrip_check", "tangle"]
__version__ = "0.1.0"
