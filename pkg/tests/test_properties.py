"""
Property-based checks of the algebra and the commutator engine.

Each suite runs at least 1000 derandomized examples so that reruns are
reproducible.
"""

from __future__ import annotations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from opalg.algebra import AtomKind, Expr, Q, Scalar, Term, add, commutes, equal, mul, normalize, scalar_mul
from opalg.engine import MASSIVE, MASSLESS, commutator, equivalent, expand
from tests.strategies import (
    atoms,
    closable,
    exprs,
    family_sets,
    indices,
    monomials,
    nonzero_scalars,
    polynomials,
    raw_exprs,
    scalars,
)

PROPERTY_SETTINGS = settings(
    max_examples=1000,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)

axiom_sets = st.sampled_from((MASSLESS, MASSIVE))


class TestNormalFormProperties:
    @PROPERTY_SETTINGS
    @given(raw_exprs)
    def test_normalize_idempotent(self, e):
        once = normalize(e)
        assert normalize(once) == once

    @PROPERTY_SETTINGS
    @given(exprs, exprs, exprs)
    def test_mul_associative(self, a, b, c):
        assert equal(mul(mul(a, b), c), mul(a, mul(b, c)))

    @PROPERTY_SETTINGS
    @given(exprs, exprs, exprs)
    def test_left_distributive(self, a, b, c):
        assert equal(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))

    @PROPERTY_SETTINGS
    @given(exprs, exprs)
    def test_add_commutative(self, a, b):
        assert add(a, b) == add(b, a)

    @PROPERTY_SETTINGS
    @given(exprs)
    def test_additive_inverse(self, e):
        assert add(e, scalar_mul(Scalar.of(-1), e)).is_zero

    @PROPERTY_SETTINGS
    @given(exprs, nonzero_scalars)
    def test_scalar_mul_invertible(self, e, s):
        assert scalar_mul(s.inverse(), scalar_mul(s, e)) == e

    @PROPERTY_SETTINGS
    @given(raw_exprs)
    def test_q_order_stable(self, e):
        # Q never shares a family, so the subsequence of Q atoms in each term is preserved
        for term in normalize(Expr(e.terms[:1])).terms:
            qs = [f for f in term.monomial if getattr(f, "kind", None) is AtomKind.Q]
            original = [f for f in e.terms[0].monomial if getattr(f, "kind", None) is AtomKind.Q]
            assert qs == original

    @PROPERTY_SETTINGS
    @given(raw_exprs)
    def test_exact_coefficients(self, e):
        for term in normalize(e).terms:
            assert not isinstance(term.coeff.re, float)
            assert not isinstance(term.coeff.im, float)


class TestEngineProperties:
    @PROPERTY_SETTINGS
    @given(atoms, atoms, axiom_sets)
    def test_antisymmetry(self, a, b, ax):
        forward = expand(commutator(a, b), ax, form="velocity")
        backward = expand(commutator(b, a), ax, form="velocity")
        assert add(forward, backward, ax.families).is_zero

    @PROPERTY_SETTINGS
    @given(indices, closable, closable, axiom_sets)
    def test_leibniz_consistency(self, i, b, c, ax):
        a = Q(i)
        lhs = expand(commutator(a, Expr.product(b, c)), ax, form="velocity")
        split = add(
            mul(commutator(a, b), Expr.factor(c), ax.families),
            mul(Expr.factor(b), commutator(a, c), ax.families),
            ax.families,
        )
        rhs = expand(split, ax, form="velocity")
        assert equivalent(lhs, rhs, ax)

    @PROPERTY_SETTINGS
    @given(atoms, closable, closable, axiom_sets)
    def test_jacobi(self, a, b, c, ax):
        jacobi = add(
            add(commutator(a, commutator(b, c)), commutator(b, commutator(c, a)), ax.families),
            commutator(c, commutator(a, b)),
            ax.families,
        )
        assert expand(jacobi, ax, require_closed=True).is_zero

    @PROPERTY_SETTINGS
    @given(polynomials, axiom_sets)
    def test_expand_idempotent_on_polynomials(self, e, ax):
        once = expand(e, ax, form="velocity")
        assert expand(once, ax, form="velocity") == once

    @PROPERTY_SETTINGS
    @given(indices, closable, scalars, axiom_sets)
    def test_bilinear_in_scalars(self, i, b, s, ax):
        scaled = expand(commutator(Q(i), Expr.factor(b, s)), ax, form="velocity")
        plain = expand(commutator(Q(i), b), ax, form="velocity")
        assert scaled == scalar_mul(s, plain, ax.families)


class TestPartialCommutation:
    @PROPERTY_SETTINGS
    @given(monomials, family_sets, st.lists(st.integers(min_value=0, max_value=10), max_size=12))
    def test_commuting_swaps_keep_the_normal_form(self, m, fams, swaps):
        moved = list(m)
        for k in swaps:
            if len(moved) < 2:
                break
            k %= len(moved) - 1
            if commutes(moved[k], moved[k + 1], fams):
                moved[k], moved[k + 1] = moved[k + 1], moved[k]
        a = Expr((Term(Scalar.one(), tuple(m)),))
        b = Expr((Term(Scalar.one(), tuple(moved)),))
        assert normalize(a, fams) == normalize(b, fams)
        assert equal(a, b, fams)

    @PROPERTY_SETTINGS
    @given(monomials, family_sets)
    def test_idempotent_under_declared_families(self, m, fams):
        once = normalize(Expr((Term(Scalar.one(), tuple(m)),)), fams)
        assert normalize(once, fams) == once
