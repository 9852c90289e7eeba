"""
Noncommutative polynomials over operator atoms with exact Scalar coefficients.

A monomial is an ordered tuple of factors. A factor is an Atom, a Bracket
(commutator node: unevaluated before expansion, opaque after it) or a
TimeDerivative node. Normal form rules:

  - Id atoms are dropped; the empty monomial is the identity.
  - H powers merge when only commuting factors separate them; H^0 disappears.
  - Among all rearrangements allowed by the declared commuting families the
    monomial is the lexicographically least one under Hpow < P < V < Q < nodes.
    Families need not be transitive: with {H, P} and {P, V}, V H P and V P H
    both become P V H.
  - Like terms (same monomial, same hbar/c powers) merge; zeros drop.
  - Terms are sorted by monomial key, so equal polynomials are equal tuples.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from opalg.algebra.atoms import Atom, AtomKind
from opalg.algebra.scalar import ONE, Scalar

Families = tuple[frozenset[AtomKind], ...]

# P's commute with P's and Hpow; V's commute with V's, P's and Hpow; Q never moves.
STANDARD_FAMILIES: Families = (frozenset({AtomKind.H, AtomKind.P, AtomKind.V}),)


@dataclass(frozen=True)
class Bracket:
    """Commutator node [left, right]."""

    left: Expr
    right: Expr

    def sort_key(self) -> tuple:
        return (1, self.left.sort_key(), self.right.sort_key())


@dataclass(frozen=True)
class TimeDerivative:
    """Heisenberg time-derivative node d(arg)/dt, eliminated by the engine."""

    arg: Expr

    def sort_key(self) -> tuple:
        return (2, self.arg.sort_key())


Factor = Union[Atom, Bracket, TimeDerivative]


@dataclass(frozen=True)
class Term:
    coeff: Scalar
    monomial: tuple[Factor, ...] = ()

    def key(self) -> tuple:
        return (tuple(f.sort_key() for f in self.monomial), self.coeff.units)


@dataclass(frozen=True)
class Expr:
    """Finite sum of terms. Use `normalize` (or the ring operations) for canonical form."""

    terms: tuple[Term, ...] = ()

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> Expr:
        return cls(())

    @classmethod
    def scalar(cls, s: Scalar | int | Fraction) -> Expr:
        s = _as_scalar(s)
        return cls(()) if s.is_zero else cls((Term(s, ()),))

    @classmethod
    def factor(cls, f: Factor, coeff: Scalar = ONE) -> Expr:
        if isinstance(f, Atom) and f.is_identity:
            return cls.scalar(coeff)
        return cls((Term(coeff, (f,)),))

    @classmethod
    def product(cls, *factors: Factor, coeff: Scalar = ONE) -> Expr:
        return normalize(cls((Term(coeff, tuple(factors)),)))

    # -- queries ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def sort_key(self) -> tuple:
        return tuple((t.key(), t.coeff.sort_key()) for t in self.terms)

    def factors(self) -> Iterator[Factor]:
        """Every factor at every depth (brackets and derivatives are descended)."""
        for t in self.terms:
            for f in t.monomial:
                yield f
                if isinstance(f, Bracket):
                    yield from f.left.factors()
                    yield from f.right.factors()
                elif isinstance(f, TimeDerivative):
                    yield from f.arg.factors()

    def atoms(self) -> Iterator[Atom]:
        return (f for f in self.factors() if isinstance(f, Atom))

    def has_kind(self, kind: AtomKind) -> bool:
        return any(a.kind is kind for a in self.atoms())

    def has_nodes(self) -> bool:
        return any(not isinstance(f, Atom) for f in self.factors())

    def brackets(self) -> list[Bracket]:
        return [f for t in self.terms for f in t.monomial if isinstance(f, Bracket)]

    # -- operators (standard families) -------------------------------------

    def __add__(self, other: ExprLike) -> Expr:
        return add(self, as_expr(other))

    def __radd__(self, other: ExprLike) -> Expr:
        return add(as_expr(other), self)

    def __sub__(self, other: ExprLike) -> Expr:
        return add(self, scalar_mul(Scalar.of(-1), as_expr(other)))

    def __rsub__(self, other: ExprLike) -> Expr:
        return add(as_expr(other), scalar_mul(Scalar.of(-1), self))

    def __neg__(self) -> Expr:
        return scalar_mul(Scalar.of(-1), self)

    def __mul__(self, other: ExprLike) -> Expr:
        if isinstance(other, Scalar):
            return scalar_mul(other, self)
        return mul(self, as_expr(other))

    def __rmul__(self, other: ExprLike) -> Expr:
        if isinstance(other, Scalar):
            return scalar_mul(other, self)
        return mul(as_expr(other), self)

    def __str__(self) -> str:
        from opalg.dsl.printer import print_expr

        return print_expr(self)


ExprLike = Union[Expr, Atom, Bracket, TimeDerivative, Scalar, int, Fraction]


def _as_scalar(s: Scalar | int | Fraction) -> Scalar:
    return s if isinstance(s, Scalar) else Scalar.of(s)


def as_expr(x: ExprLike) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (Atom, Bracket, TimeDerivative)):
        return Expr.factor(x)
    if isinstance(x, (Scalar, int, Fraction)):
        return Expr.scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Expr")


# ---------------------------------------------------------------------------
# Normal form
# ---------------------------------------------------------------------------


def commutes(x: Factor, y: Factor, families: Families) -> bool:
    """True when x and y are atoms whose kinds share a declared commuting family."""
    if not (isinstance(x, Atom) and isinstance(y, Atom)):
        return False
    return any(x.kind in fam and y.kind in fam for fam in families)


def _normalize_factor(f: Factor, families: Families) -> Factor:
    if isinstance(f, Bracket):
        return Bracket(normalize(f.left, families), normalize(f.right, families))
    if isinstance(f, TimeDerivative):
        return TimeDerivative(normalize(f.arg, families))
    return f


def _is_h(f: Factor) -> bool:
    return isinstance(f, Atom) and f.kind is AtomKind.H


def _merge_powers(m: list[Factor], families: Families) -> None:
    """Merge H powers that meet once the factors between them are commuted away."""
    changed = True
    while changed:
        changed = False
        for a, x in enumerate(m):
            if not _is_h(x):
                continue
            for b in range(a + 1, len(m)):
                y = m[b]
                if _is_h(y):
                    power = (x.power or 0) + (y.power or 0)
                    del m[b]
                    if power:
                        m[a] = Atom(AtomKind.H, power=power)
                    else:
                        del m[a]
                    changed = True
                    break
                if not commutes(x, y, families):
                    break
            if changed:
                break


def _normalize_monomial(monomial: Iterable[Factor], families: Families) -> tuple[Factor, ...]:
    m = [
        _normalize_factor(f, families)
        for f in monomial
        if not (isinstance(f, Atom) and f.is_identity)
    ]
    _merge_powers(m, families)
    # lexicographically least rearrangement: repeatedly take the smallest factor
    # that commutes with everything still to its left
    out: list[Factor] = []
    while m:
        best = 0
        for k in range(1, len(m)):
            f = m[k]
            if f.sort_key() < m[best].sort_key() and all(commutes(g, f, families) for g in m[:k]):
                best = k
        out.append(m.pop(best))
    return tuple(out)


def normalize(e: Expr, families: Families = STANDARD_FAMILIES) -> Expr:
    """Canonical form of `e`; idempotent."""
    merged: dict[tuple, Term] = {}
    for t in e.terms:
        if t.coeff.is_zero:
            continue
        term = Term(t.coeff, _normalize_monomial(t.monomial, families))
        key = term.key()
        prev = merged.get(key)
        merged[key] = term if prev is None else Term(prev.coeff.add_like(term.coeff), term.monomial)
    terms = sorted((t for t in merged.values() if not t.coeff.is_zero), key=Term.key)
    return Expr(tuple(terms))


# ---------------------------------------------------------------------------
# Ring operations
# ---------------------------------------------------------------------------


def add(a: Expr, b: Expr, families: Families = STANDARD_FAMILIES) -> Expr:
    return normalize(Expr(a.terms + b.terms), families)


def scalar_mul(s: Scalar, a: Expr, families: Families = STANDARD_FAMILIES) -> Expr:
    if s.is_zero:
        return Expr.zero()
    return normalize(Expr(tuple(Term(s * t.coeff, t.monomial) for t in a.terms)), families)


def mul(a: Expr, b: Expr, families: Families = STANDARD_FAMILIES) -> Expr:
    """Noncommutative product: monomials concatenate left-to-right."""
    terms = tuple(
        Term(ta.coeff * tb.coeff, ta.monomial + tb.monomial) for ta in a.terms for tb in b.terms
    )
    return normalize(Expr(terms), families)


def sum_exprs(items: Iterable[Expr], families: Families = STANDARD_FAMILIES) -> Expr:
    terms: list[Term] = []
    for e in items:
        terms.extend(e.terms)
    return normalize(Expr(tuple(terms)), families)


def equal(a: Expr, b: Expr, families: Families = STANDARD_FAMILIES) -> bool:
    """True iff normalize(a - b) is zero."""
    return add(a, scalar_mul(Scalar.of(-1), b, families), families).is_zero


def substitute(
    e: Expr,
    replace: Callable[[Atom], Expr | None],
    families: Families = STANDARD_FAMILIES,
) -> Expr:
    """Replace atoms (at every depth) by `replace(atom)` when it returns an Expr."""
    out: list[Expr] = []
    for t in e.terms:
        acc = Expr.scalar(t.coeff)
        for f in t.monomial:
            if isinstance(f, Atom):
                r = replace(f)
                piece = r if r is not None else Expr.factor(f)
            elif isinstance(f, Bracket):
                piece = Expr.factor(
                    Bracket(
                        substitute(f.left, replace, families),
                        substitute(f.right, replace, families),
                    )
                )
            else:
                piece = Expr.factor(TimeDerivative(substitute(f.arg, replace, families)))
            acc = mul(acc, piece, families)
        out.append(acc)
    return sum_exprs(out, families)
