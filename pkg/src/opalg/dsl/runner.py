"""
Script runner: evaluates the syntax tree against the engine.

Statements run in order. Axiom blocks become AxiomSets (index variables in
their rules range over 1..3; a later rule for the same pair wins). Each
assertion expands both sides under its named set and compares them modulo
that set's definitions. When the right side is commutator-free the left
side must close completely, otherwise the assertion reports an error.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Literal

from opalg.algebra import (
    INDICES,
    ONE,
    STANDARD_FAMILIES,
    Atom,
    AtomKind,
    Bracket,
    Expr,
    Families,
    I,
    Scalar,
    TimeDerivative,
    mul,
    normalize,
    scalar_mul,
    sum_exprs,
)
from opalg.dsl import ast
from opalg.dsl.parser import parse, parse_expression
from opalg.dsl.printer import print_assert, print_expr
from opalg.engine.axioms import BUILTIN_AXIOM_SETS, AxiomSet, feeds_itself
from opalg.engine.expand import equivalent, expand
from opalg.errors import RewriteLimitExceeded, ScriptError, SourceSpan, UnresolvedCommutator

logger = logging.getLogger(__name__)

Status = Literal["pass", "fail", "error"]
_MINUS_ONE = Scalar.of(-1)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssertOutcome:
    span: SourceSpan
    text: str
    axioms: str
    status: Status
    index: tuple[int, ...] | None = None
    lhs: str | None = None
    rhs: str | None = None
    message: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class RunReport:
    outcomes: list[AssertOutcome] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.outcomes)

    @property
    def passed(self) -> int:
        return sum(1 for o in self.outcomes if o.passed)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    @property
    def summary(self) -> str:
        return f"{self.passed}/{self.total} assertions passed"


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


@dataclass
class _Scope:
    lets: dict[str, ast.Node]
    bindings: dict[str, int]
    families: Families


def _atom(ref: ast.AtomRef, scope: _Scope) -> Atom:
    index = ref.index
    if isinstance(index, str):
        if index not in scope.bindings:
            raise ScriptError(ref.span, f"unbound index {index!r}")
        index = scope.bindings[index]
    try:
        return Atom(AtomKind(ref.kind), index=index, power=ref.power)
    except ValueError as exc:
        raise ScriptError(ref.span, str(exc)) from exc


def evaluate(node: ast.Node, scope: _Scope) -> Expr:
    """Expr for `node`, normalized under the scope's families; nodes stay unevaluated."""
    fams = scope.families
    if isinstance(node, ast.Num):
        return Expr.scalar(Scalar.of(node.value))
    if isinstance(node, ast.ImagUnit):
        return Expr.scalar(I)
    if isinstance(node, ast.Constant):
        s = Scalar.of(hbar=node.power) if node.name == "hbar" else Scalar.of(c=node.power)
        return Expr.scalar(s)
    if isinstance(node, ast.AtomRef):
        return Expr.factor(_atom(node, scope))
    if isinstance(node, ast.NameRef):
        if node.name not in scope.lets:
            raise ScriptError(node.span, f"undeclared name {node.name!r}")
        return evaluate(scope.lets[node.name], scope)
    if isinstance(node, ast.Comm):
        return Expr.factor(Bracket(evaluate(node.left, scope), evaluate(node.right, scope)))
    if isinstance(node, ast.Ddt):
        return Expr.factor(TimeDerivative(evaluate(node.arg, scope)))
    if isinstance(node, ast.Product):
        acc = Expr.scalar(ONE)
        for f in node.factors:
            acc = mul(acc, evaluate(f, scope), fams)
        return acc
    if isinstance(node, ast.Sum):
        parts = []
        for sign, t in node.terms:
            value = evaluate(t, scope)
            parts.append(scalar_mul(_MINUS_ONE, value, fams) if sign == "-" else value)
        return sum_exprs(parts, fams)
    raise TypeError(f"not an expression node: {type(node).__name__}")


def _assignments(names: list[str]) -> list[dict[str, int]]:
    return [dict(zip(names, values)) for values in itertools.product(INDICES, repeat=len(names))]


def build_axiom_set(decl: ast.AxiomDecl, lets: dict[str, ast.Node]) -> AxiomSet:
    families: Families = tuple(
        frozenset(AtomKind(k) for k in rule.kinds) for rule in decl.rules if isinstance(rule, ast.FamilyDecl)
    )
    comms: dict[tuple[Atom, Atom], Expr] = {}
    defs: dict[Atom, Expr] = {}
    relations: list[tuple[Expr, Expr]] = []

    for rule in decl.rules:
        if isinstance(rule, ast.CommRule):
            names = list(dict.fromkeys(ast.free_indices(rule.left) + ast.free_indices(rule.right) + ast.free_indices(rule.value)))
            for binding in _assignments(names):
                scope = _Scope(lets, binding, families)
                a, b = _atom(rule.left, scope), _atom(rule.right, scope)
                comms.pop((b, a), None)
                comms[(a, b)] = evaluate(rule.value, scope)
        elif isinstance(rule, ast.DefRule):
            names = list(dict.fromkeys(ast.free_indices(rule.atom) + ast.free_indices(rule.value)))
            for binding in _assignments(names):
                scope = _Scope(lets, binding, families)
                defs[_atom(rule.atom, scope)] = evaluate(rule.value, scope)
        elif isinstance(rule, ast.RelationRule):
            names = list(dict.fromkeys(ast.free_indices(rule.lhs) + ast.free_indices(rule.rhs)))
            for binding in _assignments(names):
                scope = _Scope(lets, binding, families)
                pair = (evaluate(rule.lhs, scope), evaluate(rule.rhs, scope))
                if feeds_itself(*pair):
                    raise ScriptError(
                        rule.span, f"relation right side {pair[1]} contains the leading term of {pair[0]}"
                    )
                if pair not in relations:
                    relations.append(pair)

    logger.debug("axiom set %s: %d commutators, %d definitions", decl.name, len(comms), len(defs))
    return AxiomSet(
        name=decl.name,
        base_comms=comms,
        commuting_families=families,
        defs=defs,
        relations=tuple(relations),
    )


def _check(stmt: ast.Assert, ax: AxiomSet, scope: _Scope, index: tuple[int, ...] | None) -> AssertOutcome:
    text = print_assert(stmt)
    try:
        lhs = evaluate(stmt.lhs, scope)
        rhs = evaluate(stmt.rhs, scope)
        lhs_n = expand(lhs, ax, require_closed=not rhs.has_nodes())
        rhs_n = expand(rhs, ax)
    except UnresolvedCommutator as exc:
        return AssertOutcome(stmt.span, text, ax.name, "error", index, message=str(exc.at(stmt.span)))
    except (ScriptError, RewriteLimitExceeded) as exc:
        return AssertOutcome(stmt.span, text, ax.name, "error", index, message=str(exc))
    status: Status = "pass" if equivalent(lhs_n, rhs_n, ax) else "fail"
    if status == "fail":
        logger.info("assertion at %s failed for %s: %s != %s", stmt.span, index, lhs_n, rhs_n)
    return AssertOutcome(stmt.span, text, ax.name, status, index, print_expr(lhs_n), print_expr(rhs_n))


def run(script: ast.Script) -> RunReport:
    """Execute statements in order and collect every assertion outcome."""
    axiom_sets: dict[str, AxiomSet] = dict(BUILTIN_AXIOM_SETS)
    lets: dict[str, ast.Node] = {}
    report = RunReport()
    for stmt in script.statements:
        if isinstance(stmt, ast.AxiomDecl):
            axiom_sets[stmt.name] = build_axiom_set(stmt, lets)
        elif isinstance(stmt, ast.LetBinding):
            lets[stmt.name] = stmt.value
        else:
            body = stmt.body if isinstance(stmt, ast.ForallAssert) else stmt
            if body.axioms not in axiom_sets:
                raise ScriptError(body.span, f"unknown axiom set {body.axioms!r}")
            ax = axiom_sets[body.axioms]
            if isinstance(stmt, ast.ForallAssert):
                for binding in _assignments(list(stmt.indices)):
                    index = tuple(binding[n] for n in stmt.indices)
                    report.outcomes.append(_check(body, ax, _Scope(lets, binding, ax.families), index))
            else:
                report.outcomes.append(_check(body, ax, _Scope(lets, {}, ax.families), None))
    logger.info("script run: %s", report.summary)
    return report


def run_text(text: str) -> RunReport:
    return run(parse(text))


def read_expr(text: str, families: Families = STANDARD_FAMILIES) -> Expr:
    """Parse and evaluate a closed expression (commutator nodes are kept, not expanded)."""
    return normalize(evaluate(parse_expression(text), _Scope({}, {}, families)), families)
