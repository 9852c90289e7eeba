"""
Operator atoms: Q_i, P_i, V_i (= dQ_i/dt), H^n and the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

INDICES: tuple[int, ...] = (1, 2, 3)


class AtomKind(str, Enum):
    """Atom kinds; the declaration order is NOT the monomial order (see RANK)."""

    Q = "Q"
    P = "P"
    V = "V"
    H = "H"
    ID = "Id"


# Fixed total order inside a commuting run: Hpow < P < V < Q
RANK: dict[AtomKind, int] = {
    AtomKind.ID: 0,
    AtomKind.H: 1,
    AtomKind.P: 2,
    AtomKind.V: 3,
    AtomKind.Q: 4,
}

INDEXED_KINDS = frozenset({AtomKind.Q, AtomKind.P, AtomKind.V})


@dataclass(frozen=True)
class Atom:
    """A single operator symbol. `index` for Q/P/V, `power` for H only."""

    kind: AtomKind
    index: int | None = None
    power: int | None = None

    def __post_init__(self) -> None:
        if self.kind in INDEXED_KINDS:
            if self.index not in INDICES:
                raise ValueError(f"{self.kind.value} needs an index in 1..3, got {self.index!r}")
            if self.power is not None:
                raise ValueError(f"{self.kind.value} takes no power")
        elif self.kind is AtomKind.H:
            if self.index is not None:
                raise ValueError("H takes no index")
            if not self.power:
                raise ValueError("H power must be a nonzero integer")
        elif self.index is not None or self.power is not None:
            raise ValueError("Id takes neither index nor power")

    def sort_key(self) -> tuple:
        return (0, RANK[self.kind], self.index or 0, self.power or 0)

    @property
    def is_identity(self) -> bool:
        return self.kind is AtomKind.ID

    def __str__(self) -> str:
        if self.kind is AtomKind.ID:
            return "Id"
        if self.kind is AtomKind.H:
            return "H" if self.power == 1 else f"H^{self.power}"
        return f"{self.kind.value}[{self.index}]"


def Q(i: int) -> Atom:
    return Atom(AtomKind.Q, index=i)


def P(i: int) -> Atom:
    return Atom(AtomKind.P, index=i)


def V(i: int) -> Atom:
    return Atom(AtomKind.V, index=i)


def H(power: int = 1) -> Atom:
    return Atom(AtomKind.H, power=power)


IDENTITY = Atom(AtomKind.ID)
