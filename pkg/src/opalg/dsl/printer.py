"""
Deterministic text rendering of Exprs and scripts, in the script syntax.

    i hbar c^2 H^-2 P_1 P_2  ->  "i*hbar*c^2*H^-2*P[1]*P[2]"
    zero                     ->  "0"
"""

from __future__ import annotations

from fractions import Fraction

from opalg.algebra import Atom, Bracket, Expr, Scalar, Term, TimeDerivative
from opalg.dsl import ast


def _rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _power(name: str, k: int) -> str:
    return name if k == 1 else f"{name}^{k}"


def _coefficient(s: Scalar) -> tuple[bool, list[str]]:
    """(negative, factor strings) with the sign pulled out where possible."""
    parts: list[str] = []
    negative = False
    if s.im == 0:
        negative = s.re < 0
        if abs(s.re) != 1:
            parts.append(_rational(abs(s.re)))
    elif s.re == 0:
        negative = s.im < 0
        if abs(s.im) != 1:
            parts.append(_rational(abs(s.im)))
        parts.append("i")
    else:
        im = "i" if abs(s.im) == 1 else f"{_rational(abs(s.im))}*i"
        parts.append(f"({_rational(s.re)}{'+' if s.im > 0 else '-'}{im})")
    if s.hbar_exp:
        parts.append(_power("hbar", s.hbar_exp))
    if s.c_exp:
        parts.append(_power("c", s.c_exp))
    return negative, parts


def _factor(f: Atom | Bracket | TimeDerivative) -> str:
    if isinstance(f, Bracket):
        return f"comm({print_expr(f.left)}, {print_expr(f.right)})"
    if isinstance(f, TimeDerivative):
        return f"ddt({print_expr(f.arg)})"
    return str(f)


def _term(t: Term) -> tuple[bool, str]:
    negative, parts = _coefficient(t.coeff)
    parts.extend(_factor(f) for f in t.monomial)
    return negative, "*".join(parts) or "1"


def print_expr(e: Expr) -> str:
    if e.is_zero:
        return "0"
    out: list[str] = []
    for k, t in enumerate(e.terms):
        negative, body = _term(t)
        if k == 0:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# Syntax tree
# ---------------------------------------------------------------------------


def _wrap(node: ast.Node) -> str:
    text = print_node(node)
    return f"({text})" if isinstance(node, ast.Sum) else text


def print_node(node: ast.Node) -> str:
    if isinstance(node, ast.Num):
        return _rational(node.value)
    if isinstance(node, ast.ImagUnit):
        return "i"
    if isinstance(node, ast.Constant):
        return _power(node.name, node.power)
    if isinstance(node, ast.AtomRef):
        if node.kind == "Id":
            return "Id"
        if node.kind == "H":
            return _power("H", node.power or 1)
        return f"{node.kind}[{node.index}]"
    if isinstance(node, ast.NameRef):
        return node.name
    if isinstance(node, ast.Comm):
        return f"comm({print_node(node.left)}, {print_node(node.right)})"
    if isinstance(node, ast.Ddt):
        return f"ddt({print_node(node.arg)})"
    if isinstance(node, ast.Product):
        return "*".join(_wrap(f) for f in node.factors)
    if isinstance(node, ast.Sum):
        out = []
        for k, (sign, t) in enumerate(node.terms):
            body = _wrap(t)
            if k == 0:
                out.append(f"-{body}" if sign == "-" else body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)
    raise TypeError(f"not an expression node: {type(node).__name__}")


def _print_rule(rule: ast.Rule) -> str:
    if isinstance(rule, ast.CommRule):
        return f"comm({print_node(rule.left)}, {print_node(rule.right)}) = {print_node(rule.value)};"
    if isinstance(rule, ast.DefRule):
        return f"def {print_node(rule.atom)} = {print_node(rule.value)};"
    if isinstance(rule, ast.FamilyDecl):
        return f"commuting {{{', '.join(rule.kinds)}}};"
    return f"relation {print_node(rule.lhs)} = {print_node(rule.rhs)};"


def print_assert(a: ast.Assert) -> str:
    return f"assert {print_node(a.lhs)} == {print_node(a.rhs)} under {a.axioms};"


def print_statement(stmt: ast.Statement) -> str:
    if isinstance(stmt, ast.AxiomDecl):
        body = "".join(f"    {_print_rule(r)}\n" for r in stmt.rules)
        return f"axioms {stmt.name} {{\n{body}}}"
    if isinstance(stmt, ast.LetBinding):
        return f"let {stmt.name} = {print_node(stmt.value)};"
    if isinstance(stmt, ast.ForallAssert):
        return f"forall {', '.join(stmt.indices)}: {print_assert(stmt.body)}"
    return print_assert(stmt)


def print_script(script: ast.Script) -> str:
    return "".join(f"{print_statement(s)}\n" for s in script.statements)
