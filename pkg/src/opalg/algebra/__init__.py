"""
Exact noncommutative operator algebra: Scalar coefficients, atoms, normal forms.
"""

from opalg.algebra.atoms import IDENTITY, INDICES, Atom, AtomKind, H, P, Q, V
from opalg.algebra.expr import (
    STANDARD_FAMILIES,
    Bracket,
    Expr,
    Families,
    Term,
    TimeDerivative,
    add,
    as_expr,
    commutes,
    equal,
    mul,
    normalize,
    scalar_mul,
    substitute,
    sum_exprs,
)
from opalg.algebra.scalar import C, HBAR, I, ONE, ZERO, Scalar

__all__ = [
    "Atom",
    "AtomKind",
    "Bracket",
    "C",
    "Expr",
    "Families",
    "H",
    "HBAR",
    "I",
    "IDENTITY",
    "INDICES",
    "ONE",
    "P",
    "Q",
    "STANDARD_FAMILIES",
    "Scalar",
    "Term",
    "TimeDerivative",
    "V",
    "ZERO",
    "add",
    "as_expr",
    "commutes",
    "equal",
    "mul",
    "normalize",
    "scalar_mul",
    "substitute",
    "sum_exprs",
]
