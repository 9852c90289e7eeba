"""
Recursive-descent parser for .oad scripts.

    script    := stmt*
    stmt      := axiomdecl | letb | assert | forall
    axiomdecl := "axioms" NAME "{" (commrule | defrule | famdecl | relrule)* "}"
    commrule  := "comm" "(" atom "," atom ")" "=" expr ";"
    defrule   := "def" atom "=" expr ";"
    famdecl   := "commuting" "{" kind ("," kind)* "}" ";"
    relrule   := "relation" expr "=" expr ";"
    letb      := "let" NAME "=" expr ";"
    assert    := "assert" expr "==" expr "under" NAME ";"
    forall    := "forall" IDX ("," IDX)* ":" assert
    expr      := ["-"] term (("+" | "-") term)*
    term      := factor ("*" factor)*
    factor    := INT ["/" INT] | "i" | ("hbar" | "c") ["^" SIGNED_INT] | atom | NAME
               | "comm" "(" expr "," expr ")" | "ddt" "(" expr ")"
               | "sum" "(" IDX "," expr ")" | "(" expr ")"
    atom      := ("Q" | "P" | "V") "[" (DIGIT | IDX) "]" | "H" ["^" SIGNED_INT] | "Id"

Names (lets and axiom sets) must be declared before use. Index variables in
axiom blocks and lets are free (bound later); in assertions they must be bound
by the enclosing forall or sum.
"""

from __future__ import annotations

from collections.abc import Iterable
from fractions import Fraction

from opalg.algebra import INDICES
from opalg.dsl import ast
from opalg.dsl.lexer import Token, TokenKind, tokenize
from opalg.engine.axioms import BUILTIN_AXIOM_SETS
from opalg.errors import ParseError

INDEXED_ATOMS = frozenset({"Q", "P", "V"})
ATOM_NAMES = INDEXED_ATOMS | {"H", "Id"}
FAMILY_KINDS = ("Q", "P", "V", "H")
# parentheses, comm, ddt and sum each open one level
MAX_NESTING = 64
KEYWORDS = frozenset(
    {
        "axioms",
        "def",
        "commuting",
        "relation",
        "let",
        "assert",
        "forall",
        "under",
        "comm",
        "ddt",
        "sum",
        "i",
        "hbar",
        "c",
    }
) | ATOM_NAMES


def _quote(s: str) -> str:
    return f'"{s}"'


class Parser:
    def __init__(self, text: str, axiom_names: Iterable[str] = ()) -> None:
        self.tokens = tokenize(text)
        self.pos = 0
        self.axiom_names: set[str] = set(BUILTIN_AXIOM_SETS) | set(axiom_names)
        self.lets: dict[str, ast.Node] = {}
        self.depth = 0
        # None: free index variables allowed; otherwise the bound ones
        self.bound: set[str] | None = None

    # -- token helpers ------------------------------------------------------

    @property
    def nt(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.nt
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def peek(self, value: str) -> bool:
        return self.nt.kind in (TokenKind.PUNCT, TokenKind.NAME) and self.nt.value == value

    def peek_kind(self, kind: TokenKind) -> bool:
        return self.nt.kind is kind

    def error(self, expected: str) -> ParseError:
        return ParseError(self.nt.span, expected, self.nt.describe())

    def match(self, value: str) -> Token:
        if not self.peek(value):
            raise self.error(_quote(value))
        return self.advance()

    def match_kind(self, kind: TokenKind, expected: str) -> Token:
        if not self.peek_kind(kind):
            raise self.error(expected)
        return self.advance()

    def match_new_name(self, what: str) -> Token:
        tok = self.match_kind(TokenKind.NAME, what)
        if tok.value in KEYWORDS:
            raise ParseError(tok.span, what, tok.value)
        return tok

    def match_signed_int(self) -> int:
        negative = False
        if self.peek("-"):
            self.advance()
            negative = True
        tok = self.match_kind(TokenKind.INT, "an integer")
        return -int(tok.value) if negative else int(tok.value)

    # -- statements ---------------------------------------------------------

    def parse_script(self) -> ast.Script:
        statements: list[ast.Statement] = []
        while not self.peek_kind(TokenKind.EOF):
            if self.peek("axioms"):
                statements.append(self.parse_axiom_decl())
            elif self.peek("let"):
                statements.append(self.parse_let())
            elif self.peek("assert"):
                self.bound = set()
                statements.append(self.parse_assert())
                self.bound = None
            elif self.peek("forall"):
                statements.append(self.parse_forall())
            else:
                raise self.error('"axioms", "let", "assert" or "forall"')
        return ast.Script(tuple(statements))

    def parse_axiom_decl(self) -> ast.AxiomDecl:
        start = self.match("axioms").span
        name = self.match_new_name("an axiom set name").value
        self.match("{")
        rules: list[ast.Rule] = []
        while not self.peek("}"):
            if self.peek("comm"):
                rules.append(self.parse_comm_rule())
            elif self.peek("def"):
                rules.append(self.parse_def_rule())
            elif self.peek("commuting"):
                rules.append(self.parse_family_decl())
            elif self.peek("relation"):
                rules.append(self.parse_relation_rule())
            else:
                raise self.error('"comm", "def", "commuting", "relation" or "}"')
        self.match("}")
        self.axiom_names.add(name)
        return ast.AxiomDecl(name, tuple(rules), start)

    def parse_comm_rule(self) -> ast.CommRule:
        start = self.match("comm").span
        self.match("(")
        left = self.parse_atom()
        self.match(",")
        right = self.parse_atom()
        self.match(")")
        self.match("=")
        value = self.parse_expr()
        self.match(";")
        return ast.CommRule(left, right, value, start)

    def parse_def_rule(self) -> ast.DefRule:
        start = self.match("def").span
        atom = self.parse_atom()
        self.match("=")
        value = self.parse_expr()
        self.match(";")
        return ast.DefRule(atom, value, start)

    def parse_family_decl(self) -> ast.FamilyDecl:
        start = self.match("commuting").span
        self.match("{")
        kinds = [self.parse_family_kind()]
        while self.peek(","):
            self.advance()
            kinds.append(self.parse_family_kind())
        self.match("}")
        self.match(";")
        return ast.FamilyDecl(tuple(kinds), start)

    def parse_family_kind(self) -> str:
        if self.nt.kind is TokenKind.NAME and self.nt.value in FAMILY_KINDS:
            return self.advance().value
        raise self.error("an atom kind (Q, P, V or H)")

    def parse_relation_rule(self) -> ast.RelationRule:
        start = self.match("relation").span
        lhs = self.parse_expr()
        self.match("=")
        rhs = self.parse_expr()
        self.match(";")
        return ast.RelationRule(lhs, rhs, start)

    def parse_let(self) -> ast.LetBinding:
        start = self.match("let").span
        tok = self.match_new_name("a binding name")
        self.match("=")
        value = self.parse_expr()
        self.match(";")
        self.lets[tok.value] = value
        return ast.LetBinding(tok.value, value, start)

    def parse_assert(self) -> ast.Assert:
        start = self.match("assert").span
        lhs = self.parse_expr()
        self.match("==")
        rhs = self.parse_expr()
        self.match("under")
        tok = self.match_kind(TokenKind.NAME, "an axiom set name")
        if tok.value not in self.axiom_names:
            raise ParseError(tok.span, "a declared axiom set name", tok.value)
        self.match(";")
        return ast.Assert(lhs, rhs, tok.value, start)

    def parse_forall(self) -> ast.ForallAssert:
        start = self.match("forall").span
        names = [self.parse_index_var()]
        while self.peek(","):
            self.advance()
            names.append(self.parse_index_var())
        self.match(":")
        self.bound = set(names)
        body = self.parse_assert()
        self.bound = None
        return ast.ForallAssert(tuple(names), body, start)

    def parse_index_var(self) -> str:
        return self.match_kind(TokenKind.NAME, "an index variable").value

    # -- expressions --------------------------------------------------------

    def parse_expr(self) -> ast.Node:
        if self.depth >= MAX_NESTING:
            raise self.error("a less deeply nested expression")
        self.depth += 1
        try:
            return self._parse_signed_sum()
        finally:
            self.depth -= 1

    def _parse_signed_sum(self) -> ast.Node:
        start = self.nt.span
        sign = "+"
        if self.peek("-"):
            self.advance()
            sign = "-"
        terms = [(sign, self.parse_term())]
        while self.peek("+") or self.peek("-"):
            sign = self.advance().value
            terms.append((sign, self.parse_term()))
        if len(terms) == 1 and terms[0][0] == "+":
            return terms[0][1]
        return ast.Sum(tuple(terms), start)

    def parse_term(self) -> ast.Node:
        start = self.nt.span
        factors = [self.parse_factor()]
        while self.peek("*"):
            self.advance()
            factors.append(self.parse_factor())
        return factors[0] if len(factors) == 1 else ast.Product(tuple(factors), start)

    def parse_factor(self) -> ast.Node:
        tok = self.nt
        if tok.kind is TokenKind.INT:
            self.advance()
            value = Fraction(int(tok.value))
            if self.peek("/"):
                self.advance()
                den = self.match_kind(TokenKind.INT, "a denominator")
                if int(den.value) == 0:
                    raise ParseError(den.span, "a nonzero denominator", den.value)
                value /= int(den.value)
            return ast.Num(value, tok.span)
        if self.peek("("):
            self.advance()
            inner = self.parse_expr()
            self.match(")")
            return inner
        if tok.kind is not TokenKind.NAME:
            raise self.error("an operand")
        if tok.value == "i":
            self.advance()
            return ast.ImagUnit(tok.span)
        if tok.value in ("hbar", "c"):
            self.advance()
            power = 1
            if self.peek("^"):
                self.advance()
                power = self.match_signed_int()
            return ast.Constant(tok.value, power, tok.span)
        if tok.value in ATOM_NAMES:
            return self.parse_atom()
        if tok.value == "comm":
            return self.parse_comm()
        if tok.value == "ddt":
            self.advance()
            self.match("(")
            arg = self.parse_expr()
            self.match(")")
            return ast.Ddt(arg, tok.span)
        if tok.value == "sum":
            return self.parse_sum()
        if tok.value in KEYWORDS:
            raise self.error("an operand")
        if tok.value not in self.lets:
            raise ParseError(tok.span, "a declared name", tok.value)
        self.advance()
        return ast.NameRef(tok.value, tok.span)

    def parse_comm(self) -> ast.Comm:
        start = self.match("comm").span
        self.match("(")
        left = self.parse_expr()
        if self.peek(")"):
            raise self.error("a second argument to comm")
        if not self.peek(","):
            raise self.error('"," or ")"')
        self.advance()
        right = self.parse_expr()
        self.match(")")
        return ast.Comm(left, right, start)

    def parse_sum(self) -> ast.Sum:
        start = self.match("sum").span
        self.match("(")
        var = self.parse_index_var()
        self.match(",")
        outer = self.bound
        if outer is not None:
            self.bound = outer | {var}
        body = self.parse_expr()
        self.bound = outer
        self.match(")")
        return ast.Sum(tuple(("+", ast.bind_index(body, var, k, self.lets)) for k in INDICES), start)

    def parse_atom(self) -> ast.AtomRef:
        tok = self.nt
        if tok.kind is not TokenKind.NAME or tok.value not in ATOM_NAMES:
            raise self.error("an atom (Q[..], P[..], V[..], H or Id)")
        self.advance()
        if tok.value == "Id":
            return ast.AtomRef("Id", span=tok.span)
        if tok.value == "H":
            power = 1
            if self.peek("^"):
                self.advance()
                at = self.nt.span
                power = self.match_signed_int()
                if power == 0:
                    raise ParseError(at, "a nonzero power", "0")
            return ast.AtomRef("H", power=power, span=tok.span)
        self.match("[")
        index = self.parse_index()
        self.match("]")
        return ast.AtomRef(tok.value, index, span=tok.span)

    def parse_index(self) -> ast.Index:
        tok = self.nt
        if tok.kind is TokenKind.INT:
            if int(tok.value) not in INDICES:
                raise self.error("index 1, 2 or 3")
            self.advance()
            return int(tok.value)
        if tok.kind is TokenKind.NAME:
            if self.bound is not None and tok.value not in self.bound:
                raise self.error("a bound index")
            self.advance()
            return tok.value
        raise self.error("an index")


def parse(text: str, axiom_names: Iterable[str] = ()) -> ast.Script:
    """Parse a whole script. `axiom_names` adds externally supplied set names."""
    return Parser(text, axiom_names).parse_script()


def parse_expression(text: str) -> ast.Node:
    """Parse a single closed expression (no lets, no index variables)."""
    p = Parser(text)
    p.bound = set()
    node = p.parse_expr()
    if not p.peek_kind(TokenKind.EOF):
        raise p.error("end of input")
    return node
