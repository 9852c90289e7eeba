"""Tests for printing expressions and scripts back into script syntax."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings

from opalg.algebra import HBAR, C, Expr, H, I, P, Q, Scalar, V
from opalg.dsl import parse, parse_expression, print_expr, print_node, print_script, read_expr
from tests.strategies import exprs


class TestPrintExpr:
    def test_zero(self):
        assert print_expr(Expr.zero()) == "0"

    def test_scalar_only(self):
        assert print_expr(Expr.scalar(1)) == "1"
        assert print_expr(Expr.scalar(-1)) == "-1"

    def test_massless_commutator_form(self):
        e = Expr.product(H(-2), P(1), P(2), coeff=I * HBAR * C * C)
        assert print_expr(e) == "i*hbar*c^2*H^-2*P[1]*P[2]"

    def test_negative_rational(self):
        e = Expr.factor(V(1), Scalar.of(Fraction(-1, 2)))
        assert print_expr(e) == "-1/2*V[1]"

    @pytest.mark.parametrize(
        "text",
        [
            "i*hbar*c^2*H^-2*P[1]*P[2]",
            "-1/2*V[1]",
            "(1+i)*hbar^-1*V[3]",
            "Q[1]*P[2]",
            "comm(Q[1], P[2])",
            "ddt(Q[3])",
        ],
    )
    def test_canonical_text_is_stable(self, text):
        assert print_expr(read_expr(text)) == text

    def test_bracket_kept_unevaluated(self):
        e = read_expr("comm(Q[1], H)")
        assert e.has_nodes()
        assert Q(1) in list(e.atoms())


class TestPrintNode:
    def test_sum_inside_product_is_wrapped(self):
        assert print_node(parse_expression("2*(Q[1] + P[1])")) == "2*(Q[1] + P[1])"

    def test_leading_minus(self):
        assert print_node(parse_expression("-Q[1] - c^-2*H")) == "-Q[1] - c^-2*H"


class TestRoundTrip:
    @settings(max_examples=1000, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])
    @given(exprs)
    def test_read_print_round_trip(self, e):
        assert read_expr(print_expr(e)) == e

    @pytest.mark.parametrize("name", ["eq3.oad", "eq5.oad", "eq6.oad", "sectionA.oad", "massive.oad"])
    def test_bundled_script_round_trip(self, scripts_dir, name):
        script = parse((scripts_dir / name).read_text(encoding="utf-8"))
        assert parse(print_script(script)) == script
