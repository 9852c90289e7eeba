"""
Momentum-space realizations of the operator atoms (hbar = c = 1).

    P_i            multiply by p_i
    H^n            multiply by E(p)^n, E = |p| (massless) or sqrt(p^2 + m^2)
    V_i            multiply by p_i / E(p)
    Q_canonical_i  i d/dp_i
    Q_photon_i     i sum_k (p_i p_k / p^2) d/dp_k

Multiplications are exact pointwise; derivatives use the central stencil.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from opalg.algebra import Atom, AtomKind, Bracket, Expr, TimeDerivative
from opalg.numeric.grid import MomentumGrid, WaveFunction


class OperatorKind(str, Enum):
    P = "P"
    H = "H"
    V = "V"
    Q_PHOTON = "Q_photon"
    Q_CANONICAL = "Q_canonical"
    ID = "Id"


@dataclass(frozen=True)
class OperatorDesc:
    kind: OperatorKind
    index: int | None = None
    power: int = 1
    mass: float = 0.0

    def __str__(self) -> str:
        suffix = "" if self.mass == 0.0 else f"(m={self.mass:g})"
        if self.kind is OperatorKind.H:
            return f"H^{self.power}{suffix}" if self.power != 1 else f"H{suffix}"
        if self.kind is OperatorKind.ID:
            return "Id"
        return f"{self.kind.value}[{self.index}]{suffix}"

    @property
    def is_multiplication(self) -> bool:
        return self.kind not in (OperatorKind.Q_PHOTON, OperatorKind.Q_CANONICAL)


def momentum(i: int) -> OperatorDesc:
    return OperatorDesc(OperatorKind.P, i)


def hamiltonian(power: int = 1, mass: float = 0.0) -> OperatorDesc:
    return OperatorDesc(OperatorKind.H, power=power, mass=mass)


def velocity(i: int, mass: float = 0.0) -> OperatorDesc:
    return OperatorDesc(OperatorKind.V, i, mass=mass)


def photon_position(i: int) -> OperatorDesc:
    return OperatorDesc(OperatorKind.Q_PHOTON, i)


def canonical_position(i: int) -> OperatorDesc:
    return OperatorDesc(OperatorKind.Q_CANONICAL, i)


IDENTITY_OP = OperatorDesc(OperatorKind.ID)


def multiplier(op: OperatorDesc, grid: MomentumGrid) -> np.ndarray:
    """Pointwise factor of a multiplication operator."""
    k = (op.index or 1) - 1
    if op.kind is OperatorKind.P:
        return grid.p[k]
    if op.kind is OperatorKind.H:
        return grid.field(("H", op.power, op.mass), lambda: grid.energy(op.mass) ** op.power)
    if op.kind is OperatorKind.V:
        return grid.field(("V", k, op.mass), lambda: grid.p[k] / grid.energy(op.mass))
    if op.kind is OperatorKind.ID:
        return np.ones_like(grid.p2)
    raise ValueError(f"{op} is not a multiplication operator")


def apply(op: OperatorDesc, psi: WaveFunction, grid: MomentumGrid) -> WaveFunction:
    if op.is_multiplication:
        return psi.multiply(multiplier(op, grid))
    i = (op.index or 1) - 1
    if op.kind is OperatorKind.Q_CANONICAL:
        return grid.derivative(psi, i).scale(1j)
    # Q_photon: i sum_k (p_i p_k / p^2) d_k
    total: WaveFunction | None = None
    for k in range(3):
        weight = grid.field(("photon", i, k), lambda k=k: grid.p[i] * grid.p[k] / grid.p2)
        part = grid.derivative(psi, k).multiply(weight)
        total = part if total is None else total + part
    return total.scale(1j)


def apply_chain(ops: Sequence[OperatorDesc], psi: WaveFunction, grid: MomentumGrid) -> WaveFunction:
    """ops[0] ops[1] ... ops[-1] psi (rightmost acts first)."""
    for op in reversed(ops):
        psi = apply(op, psi, grid)
    return psi


def commutator_apply(a: OperatorDesc, b: OperatorDesc, psi: WaveFunction, grid: MomentumGrid) -> WaveFunction:
    """a(b psi) - b(a psi) on the points where both orders are valid."""
    return apply(a, apply(b, psi, grid), grid) - apply(b, apply(a, psi, grid), grid)


# ---------------------------------------------------------------------------
# Symbolic expressions
# ---------------------------------------------------------------------------


def realize_atom(atom: Atom, mass: float = 0.0) -> OperatorDesc:
    """Atom -> operator: Q is the photon position when massless, canonical otherwise."""
    if atom.kind is AtomKind.Q:
        return photon_position(atom.index) if mass == 0.0 else canonical_position(atom.index)
    if atom.kind is AtomKind.P:
        return momentum(atom.index)
    if atom.kind is AtomKind.V:
        return velocity(atom.index, mass)
    if atom.kind is AtomKind.H:
        return hamiltonian(atom.power or 1, mass)
    return IDENTITY_OP


def apply_expr(e: Expr, psi: WaveFunction, grid: MomentumGrid, mass: float = 0.0) -> WaveFunction:
    """
    Act with a symbolic expression. Commutator nodes apply as a(b psi) - b(a psi),
    d/dt nodes as -i [X, H]; coefficients are evaluated at hbar = c = 1.
    """
    total: WaveFunction | None = None
    if e.is_zero:
        return psi.scale(0.0)
    for term in e.terms:
        out = psi
        for f in reversed(term.monomial):
            out = _apply_factor(f, out, grid, mass)
        out = out.scale(term.coeff.to_complex())
        total = out if total is None else total + out
    return total


def _apply_factor(f, psi: WaveFunction, grid: MomentumGrid, mass: float) -> WaveFunction:
    if isinstance(f, Bracket):
        ab = apply_expr(f.left, apply_expr(f.right, psi, grid, mass), grid, mass)
        ba = apply_expr(f.right, apply_expr(f.left, psi, grid, mass), grid, mass)
        return ab - ba
    if isinstance(f, TimeDerivative):
        h = Expr.factor(Atom(AtomKind.H, power=1))
        xh = apply_expr(f.arg, apply_expr(h, psi, grid, mass), grid, mass)
        hx = apply_expr(h, apply_expr(f.arg, psi, grid, mass), grid, mass)
        return (xh - hx).scale(-1j)
    return apply(realize_atom(f, mass), psi, grid)
