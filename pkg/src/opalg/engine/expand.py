"""
Commutator expansion under an AxiomSet.

Rules, applied recursively until only atoms (and opaque brackets) remain:
    bilinearity, antisymmetry, Leibniz [A, BC] = [A, B]C + B[A, C],
    powers of H:  [A, H^n] by Leibniz for n > 1,
                  [A, H^-m] = -H^-m [A, H^m] H^-m   (needs [H, [A, H]] = 0),
    base commutators, commuting families,
    definitions (V_i -> c^2 H^-1 P_i) and their inverses (P_i -> c^-2 H V_i),
    Jacobi for brackets whose argument is itself an opaque bracket.
A pair nothing resolves becomes an opaque Bracket factor.
"""

from __future__ import annotations

import logging
from typing import Literal

from opalg.algebra import (
    Atom,
    AtomKind,
    Bracket,
    Expr,
    H,
    Scalar,
    Term,
    TimeDerivative,
    add,
    commutes,
    mul,
    normalize,
    scalar_mul,
    substitute,
    sum_exprs,
)
from opalg.algebra.expr import Factor
from opalg.engine.axioms import AxiomSet
from opalg.errors import RewriteLimitExceeded, UnresolvedCommutator

logger = logging.getLogger(__name__)

OutputForm = Literal["auto", "velocity", "momentum"]

# 1 / (i hbar) = -i / hbar
INV_IHBAR = Scalar.of(0, -1, hbar=-1)
_MINUS_ONE = Scalar.of(-1)
# relation rewrites allowed in one reduce pass
MAX_REWRITES = 10_000


def commutator(a: Expr | Factor, b: Expr | Factor) -> Expr:
    """Unevaluated commutator node [a, b] as an Expr."""
    left = a if isinstance(a, Expr) else Expr.factor(a)
    right = b if isinstance(b, Expr) else Expr.factor(b)
    return Expr.factor(Bracket(left, right))


def time_derivative(a: Expr | Factor) -> Expr:
    """Unevaluated d/dt node."""
    return Expr.factor(TimeDerivative(a if isinstance(a, Expr) else Expr.factor(a)))


def bracket_label(b: Bracket) -> str:
    return f"[{b.left}, {b.right}]"


class _Expander:
    """One expansion pass; holds the recursion guard for definition cycles."""

    def __init__(self, ax: AxiomSet) -> None:
        self.ax = ax
        self.fams = ax.families
        self._active: set[tuple[Factor, Factor]] = set()

    # -- helpers ------------------------------------------------------------

    def _neg(self, e: Expr) -> Expr:
        return scalar_mul(_MINUS_ONE, e, self.fams)

    def _mul(self, *parts: Expr) -> Expr:
        acc = parts[0]
        for p in parts[1:]:
            acc = mul(acc, p, self.fams)
        return acc

    def _opaque(self, x: Factor, y: Factor) -> Expr:
        b = Bracket(Expr.factor(x), Expr.factor(y))
        logger.debug("opaque commutator %s under %s", bracket_label(b), self.ax.name)
        return Expr.factor(b)

    def reduce(self, e: Expr) -> Expr:
        """Apply the set's relations (lhs -> rhs) wherever a multiple of lhs occurs."""
        steps = 0
        for lhs, rhs in self.ax.relations:
            if lhs.is_zero:
                continue
            lead = lhs.terms[0]
            progress = True
            while progress:
                progress = False
                for t in e.terms:
                    if t.monomial != lead.monomial:
                        continue
                    k = t.coeff / lead.coeff
                    rest = add(e, scalar_mul(k, self._neg(lhs), self.fams), self.fams)
                    if len(rest.terms) == len(e.terms) - len(lhs.terms):
                        steps += 1
                        if steps > MAX_REWRITES:
                            raise RewriteLimitExceeded(
                                f"relations of {self.ax.name} did not settle after {MAX_REWRITES} rewrites"
                            )
                        e = add(rest, scalar_mul(k, rhs, self.fams), self.fams)
                        progress = True
                        break
        return e

    # -- expansion ----------------------------------------------------------

    def expand(self, e: Expr) -> Expr:
        out: list[Expr] = []
        for t in e.terms:
            acc = Expr.scalar(t.coeff)
            for f in t.monomial:
                acc = mul(acc, self._expand_factor(f), self.fams)
                if acc.is_zero:
                    break
            out.append(acc)
        return self.reduce(sum_exprs(out, self.fams))

    def _expand_factor(self, f: Factor) -> Expr:
        if isinstance(f, Bracket):
            return self.comm(self.expand(f.left), self.expand(f.right))
        if isinstance(f, TimeDerivative):
            return scalar_mul(
                INV_IHBAR, self.comm(self.expand(f.arg), Expr.factor(H())), self.fams
            )
        return Expr.factor(f)

    def comm(self, a: Expr, b: Expr) -> Expr:
        """[a, b] for expanded a, b (bilinear in the terms)."""
        a, b = self.reduce(a), self.reduce(b)
        out: list[Expr] = []
        for ta in a.terms:
            for tb in b.terms:
                inner = self._comm_monomials(ta.monomial, tb.monomial)
                if not inner.is_zero:
                    out.append(scalar_mul(ta.coeff * tb.coeff, inner, self.fams))
        return sum_exprs(out, self.fams)

    def _comm_monomials(self, ma: tuple[Factor, ...], mb: tuple[Factor, ...]) -> Expr:
        if not ma or not mb:
            return Expr.zero()
        if len(mb) > 1:
            # [A, b1 R] = [A, b1] R + b1 [A, R]
            head, rest = mb[:1], mb[1:]
            return add(
                mul(self._comm_monomials(ma, head), _mono(rest), self.fams),
                mul(_mono(head), self._comm_monomials(ma, rest), self.fams),
                self.fams,
            )
        if len(ma) > 1:
            # [a1 R, B] = a1 [R, B] + [a1, B] R
            head, rest = ma[:1], ma[1:]
            return add(
                mul(_mono(head), self._comm_monomials(rest, mb), self.fams),
                mul(self._comm_monomials(head, mb), _mono(rest), self.fams),
                self.fams,
            )
        return self.comm_factors(ma[0], mb[0])

    def comm_factors(self, x: Factor, y: Factor) -> Expr:
        if x == y or commutes(x, y, self.fams):
            return Expr.zero()
        if isinstance(x, Atom) and x.is_identity or isinstance(y, Atom) and y.is_identity:
            return Expr.zero()
        if x.sort_key() < y.sort_key():
            return self._neg(self.comm_factors(y, x))
        key = (x, y)
        if key in self._active:
            return self._opaque(x, y)
        self._active.add(key)
        try:
            return self._resolve(x, y)
        finally:
            self._active.discard(key)

    # -- single pair --------------------------------------------------------

    def _resolve(self, x: Factor, y: Factor) -> Expr:
        if isinstance(x, Bracket):
            return self._jacobi(x, y)
        if isinstance(y, Bracket) or isinstance(x, TimeDerivative) or isinstance(y, TimeDerivative):
            return self._opaque(x, y)

        if x.kind is AtomKind.H and y.kind is AtomKind.H:
            return Expr.zero()
        base = self.ax.base_comm(x, y)
        if base is not None:
            return base
        if y.kind is AtomKind.H and y.power != 1:
            return self._power(x, y.power or 0)
        if x.kind is AtomKind.H and x.power != 1:
            return self._neg(self._power(y, x.power or 0))

        route = self._definition_route(x, y)
        if route is not None:
            return self.comm(*route)
        return self._opaque(x, y)

    def _definition_route(self, x: Atom, y: Atom) -> tuple[Expr, Expr] | None:
        ax = self.ax
        if y in ax.defs:
            return Expr.factor(x), ax.defs[y]
        if x in ax.defs:
            return ax.defs[x], Expr.factor(y)
        if y in ax.inverse_defs:
            return Expr.factor(x), ax.inverse_defs[y]
        if x in ax.inverse_defs:
            return ax.inverse_defs[x], Expr.factor(y)
        return None

    def _power(self, a: Atom, n: int) -> Expr:
        """[a, H^n] for n != 1."""
        if n > 1:
            # [a, H H^(n-1)] = [a, H] H^(n-1) + H [a, H^(n-1)]
            first = self.comm_factors(a, H())
            rest = self.comm_factors(a, H(n - 1)) if n - 1 != 1 else first
            return add(
                mul(first, Expr.factor(H(n - 1)), self.fams),
                mul(Expr.factor(H()), rest, self.fams),
                self.fams,
            )
        m = -n
        inner = self.comm_factors(a, H())
        side = self.comm(Expr.factor(H()), inner)
        if inner.brackets() or not side.is_zero:
            logger.debug("inverse-power rule refused for [%s, H^%d]: [H, [%s, H]] != 0", a, n, a)
            return self._opaque(a, H(n))
        inner_m = inner if m == 1 else self.comm_factors(a, H(m))
        h_inv = Expr.factor(H(n))
        return self._neg(self._mul(h_inv, inner_m, h_inv))

    def _jacobi(self, x: Bracket, c: Factor) -> Expr:
        """[[A, B], C] = [A, [B, C]] - [B, [A, C]] when both inner brackets close."""
        a, b = x.left, x.right
        cc = Expr.factor(c)
        bc = self.comm(b, cc)
        ac = self.comm(a, cc)
        if bc.brackets() or ac.brackets():
            return self._opaque(x, c)
        result = add(self.comm(a, bc), self._neg(self.comm(b, ac)), self.fams)
        if result.brackets():
            return self._opaque(x, c)
        return result


def _mono(m: tuple[Factor, ...]) -> Expr:
    return Expr((Term(Scalar.one(), m),))


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def substitute_velocity(e: Expr, ax: AxiomSet) -> Expr:
    """Replace every V_i by its definition (c^2 H^-1 P_i) and renormalize."""
    return substitute(
        e, lambda a: ax.defs.get(a) if a.kind is AtomKind.V else None, ax.families
    )


def _require_closed(e: Expr) -> None:
    opaque = e.brackets()
    if opaque:
        raise UnresolvedCommutator(bracket_label(opaque[0]))


def expand(
    e: Expr,
    ax: AxiomSet,
    *,
    require_closed: bool = False,
    form: OutputForm = "auto",
) -> Expr:
    """
    Eliminate every commutator and d/dt node in `e` under `ax`.

    form="auto" reports in momentum vocabulary when `ax` defines V and the input
    mentions no V; "velocity" keeps V atoms; "momentum" always substitutes.
    """
    result = _Expander(ax).expand(normalize(e, ax.families))
    if form == "momentum" or (form == "auto" and ax.defs and not e.has_kind(AtomKind.V)):
        result = substitute_velocity(result, ax)
    if require_closed:
        _require_closed(result)
    return result


def ddt(e: Expr, ax: AxiomSet, *, require_closed: bool = False) -> Expr:
    """Heisenberg derivative (1 / i hbar)[e, H] for explicitly time-independent e."""
    result = _Expander(ax).expand(normalize(time_derivative(e), ax.families))
    if require_closed:
        _require_closed(result)
    return result


def equivalent(a: Expr, b: Expr, ax: AxiomSet) -> bool:
    """Equality modulo the set's definitions (compares momentum forms when V is defined)."""
    diff = _Expander(ax).reduce(add(a, scalar_mul(_MINUS_ONE, b, ax.families), ax.families))
    if diff.is_zero:
        return True
    return bool(ax.defs) and substitute_velocity(diff, ax).is_zero
