"""
Script syntax tree.

Indices stay symbolic (str) until the runner binds them; `sum(j, e)` never
appears here because the parser expands it. Spans are excluded from equality
so that a printed-and-reparsed script compares equal to the original.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from opalg.errors import SourceSpan

_NOWHERE = SourceSpan(1, 1)

Index = Union[int, str]


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class ImagUnit:
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class Constant:
    """hbar or c raised to an integer power."""

    name: str
    power: int = 1
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class AtomRef:
    kind: str
    index: Index | None = None
    power: int | None = None
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class NameRef:
    name: str
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class Comm:
    left: Node
    right: Node
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class Ddt:
    arg: Node
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class Product:
    factors: tuple[Node, ...]
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class Sum:
    """Signed terms; signs are "+" or "-"."""

    terms: tuple[tuple[str, Node], ...]
    span: SourceSpan = field(default=_NOWHERE, compare=False)


Node = Union[Num, ImagUnit, Constant, AtomRef, NameRef, Comm, Ddt, Product, Sum]


def bind_index(node: Node, var: str, value: int, lets: Mapping[str, Node] | None = None) -> Node:
    """
    Replace index variable `var` by `value` everywhere in `node`.

    With `lets`, a reference to a binding that mentions `var` is replaced by the
    bound copy of its value; other references stay as they are.
    """
    if isinstance(node, AtomRef):
        return AtomRef(node.kind, value, node.power, node.span) if node.index == var else node
    if isinstance(node, NameRef):
        if lets is None or node.name not in lets:
            return node
        body = lets[node.name]
        bound = bind_index(body, var, value, lets)
        return node if bound == body else bound
    if isinstance(node, Comm):
        return Comm(bind_index(node.left, var, value, lets), bind_index(node.right, var, value, lets), node.span)
    if isinstance(node, Ddt):
        return Ddt(bind_index(node.arg, var, value, lets), node.span)
    if isinstance(node, Product):
        return Product(tuple(bind_index(f, var, value, lets) for f in node.factors), node.span)
    if isinstance(node, Sum):
        return Sum(tuple((s, bind_index(t, var, value, lets)) for s, t in node.terms), node.span)
    return node


def free_indices(node: Node) -> list[str]:
    """Index variables in `node`, in first-occurrence order."""
    seen: list[str] = []

    def walk(n: Node) -> None:
        if isinstance(n, AtomRef):
            if isinstance(n.index, str) and n.index not in seen:
                seen.append(n.index)
        elif isinstance(n, Comm):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Ddt):
            walk(n.arg)
        elif isinstance(n, Product):
            for f in n.factors:
                walk(f)
        elif isinstance(n, Sum):
            for _, t in n.terms:
                walk(t)

    walk(node)
    return seen


# ---------------------------------------------------------------------------
# Axiom block rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommRule:
    left: AtomRef
    right: AtomRef
    value: Node
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class DefRule:
    atom: AtomRef
    value: Node
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class FamilyDecl:
    kinds: tuple[str, ...]
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class RelationRule:
    lhs: Node
    rhs: Node
    span: SourceSpan = field(default=_NOWHERE, compare=False)


Rule = Union[CommRule, DefRule, FamilyDecl, RelationRule]


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomDecl:
    name: str
    rules: tuple[Rule, ...]
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class LetBinding:
    name: str
    value: Node
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class Assert:
    lhs: Node
    rhs: Node
    axioms: str
    span: SourceSpan = field(default=_NOWHERE, compare=False)


@dataclass(frozen=True)
class ForallAssert:
    indices: tuple[str, ...]
    body: Assert
    span: SourceSpan = field(default=_NOWHERE, compare=False)


Statement = Union[AxiomDecl, LetBinding, Assert, ForallAssert]


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...] = ()
