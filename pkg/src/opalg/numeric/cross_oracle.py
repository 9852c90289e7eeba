"""
Cross-oracle: symbolic normal forms against direct numeric application.

A seeded generator builds small expressions (sums of at most two terms
coeff * [outer] * [Q_i, B] with B in {P_j, V_j, H, H^-1}). Each is expanded
under the Massless axiom set; the closed normal form is realized with pure
multiplications while the original is applied as nested commutators through
the stencil. The two must agree within CROSS_ORACLE_FACTOR times the
massless-cr residual of the same test function at the same h.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from fractions import Fraction
from typing import TypeVar

import numpy as np

from opalg import config
from opalg.algebra import INDICES, Atom, Expr, H, I, P, Q, Scalar, V, mul, scalar_mul, sum_exprs
from opalg.engine.axioms import MASSLESS
from opalg.engine.expand import commutator, expand
from opalg.numeric.cases import PAIRS, get_case, require_certified
from opalg.numeric.grid import MomentumGrid, trial_family
from opalg.numeric.models import GridSpec, ResidualRow
from opalg.numeric.operators import apply_expr

logger = logging.getLogger(__name__)

COEFFICIENTS = (Scalar.of(1), Scalar.of(-1), Scalar.of(Fraction(1, 2)), I, -I)

T = TypeVar("T")


def _pick(rng: np.random.Generator, options: Sequence[T]) -> T:
    return options[int(rng.integers(len(options)))]


def _inner(rng: np.random.Generator) -> Atom:
    j = _pick(rng, INDICES)
    return _pick(rng, (P(j), V(j), H(), H(-1)))


def _outer(rng: np.random.Generator) -> Atom | None:
    return _pick(rng, (None, V(_pick(rng, INDICES)), H(-1)))


def generate_expressions(seed: int = config.DEFAULT_SEED, count: int = config.CROSS_ORACLE_COUNT) -> list[Expr]:
    """Seeded expressions with Q only as the first argument of a commutator."""
    rng = np.random.default_rng(seed)
    exprs: list[Expr] = []
    for _ in range(count):
        terms = []
        for _ in range(_pick(rng, (1, 2))):
            term = commutator(Q(_pick(rng, INDICES)), _inner(rng))
            outer = _outer(rng)
            if outer is not None:
                term = mul(Expr.factor(outer), term)
            terms.append(scalar_mul(_pick(rng, COEFFICIENTS), term))
        exprs.append(sum_exprs(terms))
    return exprs


def cross_oracle_level(
    spec: GridSpec,
    seed: int = config.DEFAULT_SEED,
    sigma: float = config.SIGMA,
    family_size: int = config.FAMILY_SIZE,
    count: int = config.CROSS_ORACLE_COUNT,
) -> ResidualRow:
    require_certified()
    grid = MomentumGrid(spec)
    family = trial_family(grid, seed=seed, size=family_size, sigma=sigma)
    exprs = generate_expressions(seed, count)
    normal_forms = [expand(e, MASSLESS, require_closed=True) for e in exprs]
    reference_case = get_case("massless-cr")

    worst, worst_bound, passed = 0.0, 0.0, True
    for psi in family:
        reference = max(
            _relative_norm(reference_case.measure(grid, psi, idx)[0], psi) for idx in PAIRS
        )
        bound = config.CROSS_ORACLE_FACTOR * reference
        for e, nf in zip(exprs, normal_forms):
            diff = apply_expr(e, psi, grid) - apply_expr(nf, psi, grid)
            r = _relative_norm(diff, psi)
            if r > bound:
                passed = False
                logger.info("cross-oracle mismatch at n=%d: %s -> %s, residual %.3e > %.3e", spec.n, e, nf, r, bound)
            if r > worst:
                worst, worst_bound = r, bound
    logger.info("cross-oracle n=%d: %d expressions, worst residual %.3e", spec.n, len(exprs), worst)
    return ResidualRow(n=spec.n, h=spec.h, residual=worst, bound=worst_bound or None, passed=passed)


def _relative_norm(diff, psi) -> float:
    return diff.norm() / psi.norm(diff.valid)
