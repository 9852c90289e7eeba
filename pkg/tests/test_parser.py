"""Tests for the .oad tokenizer and parser, including error positions."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from opalg.dsl import ast, parse, parse_expression
from opalg.dsl.lexer import TokenKind, tokenize
from opalg.dsl.parser import MAX_NESTING
from opalg.errors import ParseError, SourceSpan


def _parse_error(text: str) -> ParseError:
    with pytest.raises(ParseError) as exc_info:
        parse(text)
    return exc_info.value


class TestLexer:
    def test_double_equals_is_one_token(self):
        tokens = tokenize("a==b")
        assert [t.value for t in tokens[:-1]] == ["a", "==", "b"]
        assert tokens[1].kind is TokenKind.PUNCT

    def test_comments_and_newlines(self):
        tokens = tokenize("# header\nlet x = 2; # trailing\n")
        assert [t.value for t in tokens if t.kind is not TokenKind.EOF] == ["let", "x", "=", "2", ";"]
        assert tokens[0].span == SourceSpan(2, 1)

    def test_eof_span_at_end(self):
        tokens = tokenize("Q[1]\nP")
        assert tokens[-1].kind is TokenKind.EOF
        assert tokens[-1].span == SourceSpan(2, 2)

    def test_bad_character(self):
        exc = _parse_error("assert Q[1] $ 0 under Massless;")
        assert exc.span == SourceSpan(1, 13)
        assert exc.expected == "a token"
        assert exc.found == "$"


class TestExpressions:
    def test_atoms(self):
        assert parse_expression("Q[1]") == ast.AtomRef("Q", 1)
        assert parse_expression("H") == ast.AtomRef("H", power=1)
        assert parse_expression("H^-2") == ast.AtomRef("H", power=-2)
        assert parse_expression("Id") == ast.AtomRef("Id")

    def test_constants_and_numbers(self):
        assert parse_expression("c^-2") == ast.Constant("c", -2)
        assert parse_expression("hbar") == ast.Constant("hbar", 1)
        assert parse_expression("3/4") == ast.Num(Fraction(3, 4))
        assert parse_expression("i") == ast.ImagUnit()

    def test_product_and_signed_sum(self):
        node = parse_expression("-i*hbar*V[1] + P[2]")
        assert node == ast.Sum(
            (
                ("-", ast.Product((ast.ImagUnit(), ast.Constant("hbar"), ast.AtomRef("V", 1)))),
                ("+", ast.AtomRef("P", 2)),
            )
        )

    def test_parentheses_group(self):
        node = parse_expression("2*(Q[1] - P[1])")
        assert node == ast.Product(
            (ast.Num(Fraction(2)), ast.Sum((("+", ast.AtomRef("Q", 1)), ("-", ast.AtomRef("P", 1)))))
        )

    def test_comm_and_ddt(self):
        node = parse_expression("ddt(comm(Q[1], V[2]))")
        assert node == ast.Ddt(ast.Comm(ast.AtomRef("Q", 1), ast.AtomRef("V", 2)))

    def test_sum_expands_over_indices(self):
        node = parse_expression("sum(j, V[j]*V[j])")
        assert node == ast.Sum(
            tuple(("+", ast.Product((ast.AtomRef("V", k), ast.AtomRef("V", k)))) for k in (1, 2, 3))
        )

    def test_trailing_tokens_rejected(self):
        with pytest.raises(ParseError, match="end of input"):
            parse_expression("Q[1] Q[2]")

    def test_free_index_rejected_in_closed_expression(self):
        with pytest.raises(ParseError, match="a bound index"):
            parse_expression("Q[i]")


class TestStatements:
    def test_assert_statement(self):
        script = parse("assert comm(Q[1], H) == i*hbar*V[1] under Leibniz;")
        (stmt,) = script.statements
        assert isinstance(stmt, ast.Assert)
        assert stmt.axioms == "Leibniz"
        assert stmt.span == SourceSpan(1, 1)

    def test_forall_binds_indices(self):
        script = parse("forall i, j: assert comm(Q[i], P[j]) == comm(Q[i], P[j]) under Massless;")
        (stmt,) = script.statements
        assert isinstance(stmt, ast.ForallAssert)
        assert stmt.indices == ("i", "j")
        assert ast.free_indices(stmt.body.lhs) == ["i", "j"]

    def test_let_allows_free_indices(self):
        script = parse("let momentum_j = c^-2*H*V[j];\nforall j: assert momentum_j == P[j] under Massless;")
        let, forall = script.statements
        assert isinstance(let, ast.LetBinding)
        assert ast.free_indices(let.value) == ["j"]
        assert forall.body.lhs == ast.NameRef("momentum_j")

    def test_axiom_block_rules(self):
        text = """
        axioms photon {
            commuting {H, P, V};
            comm(Q[k], H) = i*hbar*V[k];
            def V[k] = c^2*H^-1*P[k];
            relation sum(j, V[j]*V[j]) = c^2*Id;
        }
        assert comm(Q[1], H) == i*hbar*V[1] under photon;
        """
        decl, assertion = parse(text).statements
        assert isinstance(decl, ast.AxiomDecl)
        assert decl.name == "photon"
        kinds = [type(r) for r in decl.rules]
        assert kinds == [ast.FamilyDecl, ast.CommRule, ast.DefRule, ast.RelationRule]
        assert decl.rules[0].kinds == ("H", "P", "V")
        assert assertion.axioms == "photon"

    def test_external_axiom_names(self):
        script = parse("assert Q[1] == Q[1] under lab;", axiom_names=["lab"])
        assert script.statements[0].axioms == "lab"


class TestParseErrors:
    def test_missing_close_paren(self):
        exc = _parse_error("assert comm(Q[1], P[2] == 0 under Massless;")
        assert exc.span == SourceSpan(1, 24)
        assert exc.expected == '")"'
        assert exc.found == "=="
        assert str(exc) == "1:24: expected \")\", found '=='"

    def test_comm_needs_second_argument(self):
        exc = _parse_error("assert comm(Q[1]) == 0 under Massless;")
        assert exc.span == SourceSpan(1, 17)
        assert exc.expected == "a second argument to comm"

    def test_comm_needs_separator(self):
        exc = _parse_error("assert comm(Q[1] P[2]) == 0 under Massless;")
        assert exc.span == SourceSpan(1, 18)
        assert exc.expected == '"," or ")"'

    def test_error_on_later_line(self):
        exc = _parse_error("assert Q[1] == Q[1] under Massless;\n\n  assert Q[4] == 0 under Massless;")
        assert exc.span == SourceSpan(3, 12)
        assert exc.expected == "index 1, 2 or 3"

    def test_unknown_axiom_set(self):
        exc = _parse_error("assert Q[1] == Q[1] under Photon;")
        assert exc.span == SourceSpan(1, 27)
        assert exc.expected == "a declared axiom set name"
        assert exc.found == "Photon"

    def test_unbound_index_in_assert(self):
        exc = _parse_error("assert Q[i] == Q[i] under Massless;")
        assert exc.span == SourceSpan(1, 10)
        assert exc.expected == "a bound index"

    def test_undeclared_name(self):
        exc = _parse_error("assert y == 0 under Massless;")
        assert exc.expected == "a declared name"
        assert exc.found == "y"

    def test_zero_power_of_h(self):
        exc = _parse_error("assert H^0 == Id under Massless;")
        assert exc.span == SourceSpan(1, 10)
        assert exc.expected == "a nonzero power"

    def test_zero_denominator(self):
        exc = _parse_error("assert 1/0 == 0 under Massless;")
        assert exc.expected == "a nonzero denominator"

    def test_missing_semicolon_at_end(self):
        exc = _parse_error("assert Q[1] == Q[1] under Massless")
        assert exc.expected == '";"'
        assert exc.found == "end of input"

    def test_unknown_statement(self):
        exc = _parse_error("prove Q[1];")
        assert exc.span == SourceSpan(1, 1)
        assert exc.expected == '"axioms", "let", "assert" or "forall"'

    @pytest.mark.parametrize("name", ["H", "comm", "i", "under"])
    def test_keyword_not_a_set_name(self, name):
        exc = _parse_error(f"axioms {name} {{ }}")
        assert exc.expected == "an axiom set name"

    def test_bad_rule_in_axiom_block(self):
        exc = _parse_error("axioms toy { assert Q[1] == Q[1] under toy; }")
        assert exc.expected == '"comm", "def", "commuting", "relation" or "}"'

    def test_bad_family_kind(self):
        exc = _parse_error("axioms toy { commuting {H, Id}; }")
        assert exc.expected == "an atom kind (Q, P, V or H)"

    def test_nesting_limit(self):
        depth = MAX_NESTING + 6
        with pytest.raises(ParseError) as exc_info:
            parse_expression("(" * depth + "Q[1]" + ")" * depth)
        exc = exc_info.value
        assert exc.expected == "a less deeply nested expression"
        assert exc.span == SourceSpan(1, MAX_NESTING + 1)
        assert exc.found == "("

    def test_nesting_just_below_the_limit(self):
        depth = MAX_NESTING - 1
        assert parse_expression("(" * depth + "Q[1]" + ")" * depth) == ast.AtomRef("Q", 1)

    def test_deep_script_is_a_parse_error(self):
        depth = 400
        text = "assert " + "(" * depth + "Q[1]" + ")" * depth + " == Q[1] under Massless;"
        exc = _parse_error(text)
        assert exc.expected == "a less deeply nested expression"


_VALID_SCRIPTS = [
    "forall i, j: assert comm(Q[i], P[j]) == i*hbar*c^2*H^-2*P[i]*P[j] under Massless;",
    "let w = c^-2*H*V[j]; forall j: assert w == P[j] under Massless;",
    "axioms toy { commuting {H, P}; comm(Q[k], H) = i*hbar*V[k]; } assert ddt(Q[1]) == V[1] under toy;",
    "assert sum(j, V[j]*V[j]) == c^2*Id under Massless;",
    "assert 3/4*H^-1 - (P[1] + P[2]) == 0 under Massive;",
]
_REPLACEMENTS = ["", ")", "(", "==", "=", ";", ",", "[", "]", "Q", "H", "4", "0", "under", "sum", "let", "y", "^", "*", "$"]


@st.composite
def damaged_scripts(draw) -> str:
    """A valid script with one token replaced or dropped, tokens joined by single spaces."""
    values = [t.value for t in tokenize(draw(st.sampled_from(_VALID_SCRIPTS))) if t.kind is not TokenKind.EOF]
    values[draw(st.integers(0, len(values) - 1))] = draw(st.sampled_from(_REPLACEMENTS))
    return " ".join(v for v in values if v)


class TestErrorSpans:
    @settings(max_examples=500, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])
    @given(damaged_scripts())
    def test_span_points_inside_the_offending_token(self, text):
        try:
            parse(text)
        except ParseError as exc:
            assert exc.span.line == 1
            offset = exc.span.column - 1
            if "$" in text and exc.expected == "a token":
                assert text[offset] == "$"
                return
            starts = {t.span for t in tokenize(text)}
            assert exc.span in starts, (text, str(exc))
            assert offset == len(text) or not text[offset].isspace()
