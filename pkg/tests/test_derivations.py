"""Tests for the built-in derivations and their replay."""

from __future__ import annotations

import pytest

from opalg.algebra import HBAR, Bracket, Expr, H, I, P, Q, Scalar, V
from opalg.engine import MASSIVE, MASSLESS, AxiomNotPermitted, derivation_ids, get_derivation, replay
from opalg.engine.derivations import Axioms
from opalg.errors import UnknownCase

IHBAR = I * HBAR


class TestRegistry:
    def test_ids(self):
        assert derivation_ids() == ["eq3", "eq5", "eq6", "sectionA_I", "sectionA_II", "dsquare"]

    def test_unknown(self):
        with pytest.raises(UnknownCase, match="eq7"):
            get_derivation("eq7")

    def test_arity(self):
        assert len(get_derivation("eq6").indices()) == 9
        assert get_derivation("dsquare").indices() == [(1,), (2,), (3,)]

    def test_requirements(self):
        assert get_derivation("eq3").axiom_requirements == frozenset({"heisenberg"})
        assert "velocity_constant" in get_derivation("eq5").axiom_requirements


class TestAxiomAccess:
    def test_subset_outside_requirements_refused(self):
        access = Axioms(frozenset({"heisenberg"}))
        with pytest.raises(AxiomNotPermitted, match="velocity_constant"):
            access.subset("heisenberg", "velocity_constant")

    def test_subset_builds_named_set(self):
        ax = Axioms(frozenset({"heisenberg", "light_speed"})).subset("heisenberg", "light_speed")
        assert ax.name == "heisenberg+light_speed"
        assert ax.axiom_ids == frozenset({"heisenberg", "light_speed"})

    def test_override_replaces_every_subset(self):
        access = Axioms(frozenset({"heisenberg"}), override=MASSIVE)
        assert access.subset("heisenberg") is MASSIVE


class TestReplay:
    @pytest.mark.parametrize("derivation_id", ["eq3", "eq5", "eq6", "sectionA_II"])
    def test_pairs_pass(self, derivation_id):
        result = replay(derivation_id)
        assert result.passed
        assert result.summary == "9/9"
        assert result.first_failure is None

    @pytest.mark.parametrize("derivation_id", ["sectionA_I", "dsquare"])
    def test_single_index_pass(self, derivation_id):
        result = replay(derivation_id)
        assert result.passed
        assert result.summary == "3/3"

    def test_outcomes_in_lexicographic_order(self):
        result = replay("eq6", workers=3)
        assert [o.index for o in result.outcomes] == [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)]

    def test_eq3_keeps_opaque_bracket(self):
        outcome = replay("eq3").outcomes[0]
        assert outcome.index == (1, 1)
        (step,) = outcome.steps
        assert step.label == "leibniz"
        assert step.axioms == "heisenberg"
        opaque = Bracket(Expr.factor(Q(1)), Expr.factor(V(1)))
        assert opaque in step.lhs.brackets()
        vv = [t for t in step.lhs.terms if t.monomial == (V(1), V(1))]
        assert vv and vv[0].coeff == IHBAR * Scalar.of(c=-2)

    def test_eq6_momentum_form(self):
        outcome = replay("eq6").outcomes[5]
        assert outcome.index == (2, 3)
        direct = next(s for s in outcome.steps if s.label == "direct")
        assert direct.lhs == Expr.product(H(-2), P(2), P(3), coeff=IHBAR * Scalar.of(c=2))

    def test_section_a_steps(self):
        outcome = replay("sectionA_II").outcomes[1]
        assert [s.label for s in outcome.steps] == [
            "velocity-commute",
            "momentum-commute",
            "bracket-constant",
            "product-rule",
            "double-bracket",
            "speed-split",
        ]
        assert all(s.lhs.is_zero for s in outcome.steps[:-1])

    def test_speed_split_keeps_opaque_brackets(self):
        outcome = replay("sectionA_II").outcomes[0]
        split = outcome.steps[-1]
        assert split.label == "speed-split"
        assert split.axioms == "heisenberg+qv_momentum_function"
        assert split.passed
        expected = [Bracket(Expr.factor(Q(1)), Expr.factor(V(k))) for k in (1, 2, 3)]
        assert sorted(split.lhs.brackets(), key=lambda b: b.sort_key()) == expected
        # the right side is rewritten from V_k [Q_1, V_k] + [Q_1, V_k] V_k
        assert split.lhs == split.rhs

    def test_eq5_fails_under_massive(self):
        result = replay("eq5", axioms=MASSIVE)
        assert not result.passed
        assert result.axioms == "Massive"
        failure = result.first_failure
        assert failure is not None and failure.index == (1, 1)
        step = failure.first_failure
        assert step.lhs != step.rhs

    def test_eq3_holds_under_massive(self):
        assert replay("eq3", axioms=MASSIVE).passed

    def test_eq6_under_full_massless(self):
        assert replay("eq6", axioms=MASSLESS).passed

    def test_summary_counts(self):
        result = replay("eq5", axioms=MASSIVE)
        assert result.total == 9
        assert result.passed_count == 0
        assert result.summary == "0/9"
