"""Symbolic normalizer and equivalence checker for applicative expressions.

Expressions built from ``pure``, ``<*>``, ``fmap`` and ``liftAn`` are brought
to a single ``liftAn h u1 .. un`` by the multifunctor composition law; two
expressions are equal when their canonical forms agree.
"""

from .dsl import ArityMismatch, ParseError, parse_expr, parse_term, print_expr, print_term
from .errors import (ArityCapExceeded, DivergenceError, IdiomError, InvalidPosition,
                     StuckError, UnboundEffectVar)
from .expr import (Ap, CanonicalForm, EffectVar, Fmap, LiftA, Pure, pretty, replace_at,
                   subexpr_at)
from .normalizer import (DerivationTrace, RewriteStep, Settings, canonicalize, desugar,
                         equivalent, expand_lift, fuse)
from .terms import (App, Const, Lam, Var, alpha_eq, compose_nm, normalize_term,
                    substitute)

__all__ = [
    "Ap", "App", "ArityCapExceeded", "ArityMismatch", "CanonicalForm", "Const",
    "DerivationTrace", "DivergenceError", "EffectVar", "Fmap", "IdiomError",
    "InvalidPosition", "Lam", "LiftA", "ParseError", "Pure", "RewriteStep", "Settings",
    "StuckError", "UnboundEffectVar", "Var", "alpha_eq", "canonicalize", "compose_nm",
    "desugar", "equivalent", "expand_lift", "fuse", "normalize_term", "parse_expr",
    "parse_term", "pretty", "print_expr", "print_term", "replace_at", "subexpr_at",
    "substitute",
]
