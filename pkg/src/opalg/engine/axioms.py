"""
Axiom catalogue and axiom sets.

Each Axiom carries an id so that derivations can list exactly which axioms they
may use; an AxiomSet is the union of some axioms (or a set declared by a script).

Catalogue:
    heisenberg          [Q_i, H] = i hbar V_i          (Heisenberg equation with V_i = dQ_i/dt)
    velocity_constant   [Q_i, V_j] = 0                 (massless: velocity is a constant operator)
    free_particle       H and P commute                (family {H, P})
    velocity_family     H, P and V commute             (family {H, P, V})
    velocity_definition V_i = c^2 H^-1 P_i
    light_speed         V_1 V_1 + V_2 V_2 + V_3 V_3 = c^2 Id
    canonical           [Q_i, P_j] = i hbar delta_ij Id
    qv_momentum_function
                        [Q_i, V_j] commutes with V_k (it is a function of H and P)
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from opalg.algebra import (
    HBAR,
    IDENTITY,
    INDICES,
    ONE,
    Atom,
    AtomKind,
    Bracket,
    Expr,
    Families,
    H,
    I,
    P,
    Q,
    Scalar,
    Term,
    V,
    normalize,
    scalar_mul,
    sum_exprs,
)

AtomPair = tuple[Atom, Atom]
Relation = tuple[Expr, Expr]


@dataclass(frozen=True)
class Axiom:
    """One named axiom: base commutators, commuting families, definitions or relations."""

    id: str
    description: str
    comms: Mapping[AtomPair, Expr] = field(default_factory=dict)
    families: Families = ()
    defs: Mapping[Atom, Expr] = field(default_factory=dict)
    relations: tuple[Relation, ...] = ()


def feeds_itself(lhs: Expr, rhs: Expr) -> bool:
    """True when rewriting lhs -> rhs would recreate the leading monomial of lhs."""
    if lhs.is_zero:
        return False
    lead = lhs.terms[0].monomial
    return any(t.monomial == lead for t in rhs.terms)


def _invert_definition(target: Atom, value: Expr) -> tuple[Atom, Expr] | None:
    """Solve `target = s * H^k * X` for the single atom X: X = s^-1 * H^-k * target."""
    if len(value.terms) != 1:
        return None
    term = value.terms[0]
    others = [f for f in term.monomial if not (isinstance(f, Atom) and f.kind is AtomKind.H)]
    if len(others) != 1 or not isinstance(others[0], Atom):
        return None
    solved_for = others[0]
    power = sum(f.power or 0 for f in term.monomial if isinstance(f, Atom) and f.kind is AtomKind.H)
    factors: list[Atom] = [H(-power)] if power else []
    factors.append(target)
    return solved_for, Expr.product(*factors, coeff=term.coeff.inverse())


@dataclass(frozen=True)
class AxiomSet:
    """
    Base commutators (closed under antisymmetry on lookup), commuting families,
    definitions and polynomial relations. Treat as immutable.
    """

    name: str
    base_comms: Mapping[AtomPair, Expr] = field(default_factory=dict)
    commuting_families: Families = ()
    defs: Mapping[Atom, Expr] = field(default_factory=dict)
    relations: tuple[Relation, ...] = ()
    axiom_ids: frozenset[str] = frozenset()
    inverse_defs: Mapping[Atom, Expr] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        fams = self.commuting_families
        comms = {k: normalize(v, fams) for k, v in self.base_comms.items()}
        defs = {k: normalize(v, fams) for k, v in self.defs.items()}
        inverse: dict[Atom, Expr] = {}
        for target, value in defs.items():
            solved = _invert_definition(target, value)
            if solved is not None and solved[0] not in defs:
                inverse[solved[0]] = normalize(solved[1], fams)
        object.__setattr__(self, "base_comms", MappingProxyType(comms))
        object.__setattr__(self, "defs", MappingProxyType(defs))
        object.__setattr__(self, "inverse_defs", MappingProxyType(inverse))
        relations = tuple((normalize(lhs, fams), normalize(rhs, fams)) for lhs, rhs in self.relations)
        for lhs, rhs in relations:
            if feeds_itself(lhs, rhs):
                raise ValueError(f"relation {lhs} = {rhs} in {self.name} rewrites into its own leading term")
        object.__setattr__(self, "relations", relations)

    @property
    def families(self) -> Families:
        return self.commuting_families

    def base_comm(self, a: Atom, b: Atom) -> Expr | None:
        """[a, b] from the table; (b, a) answers with the negation."""
        hit = self.base_comms.get((a, b))
        if hit is not None:
            return hit
        hit = self.base_comms.get((b, a))
        if hit is not None:
            return scalar_mul(Scalar.of(-1), hit, self.families)
        return None

    def in_family(self, a: Atom, b: Atom) -> bool:
        return any(a.kind in fam and b.kind in fam for fam in self.commuting_families)

    @classmethod
    def from_axioms(cls, name: str, axioms: Iterable[Axiom]) -> AxiomSet:
        comms: dict[AtomPair, Expr] = {}
        families: list = []
        defs: dict[Atom, Expr] = {}
        relations: list[Relation] = []
        ids: set[str] = set()
        for ax in axioms:
            ids.add(ax.id)
            comms.update(ax.comms)
            families.extend(f for f in ax.families if f not in families)
            defs.update(ax.defs)
            relations.extend(ax.relations)
        return cls(
            name=name,
            base_comms=comms,
            commuting_families=tuple(families),
            defs=defs,
            relations=tuple(relations),
            axiom_ids=frozenset(ids),
        )


# ---------------------------------------------------------------------------
# Catalogue
# ---------------------------------------------------------------------------

_IHBAR = I * HBAR


def _heisenberg() -> Axiom:
    return Axiom(
        id="heisenberg",
        description="[Q_i, H] = i hbar V_i (H generates time translation)",
        comms={(Q(i), H()): Expr.factor(V(i), _IHBAR) for i in INDICES},
    )


def _velocity_constant() -> Axiom:
    return Axiom(
        id="velocity_constant",
        description="[Q_i, V_j] = 0 (massless: the velocity is a constant operator)",
        comms={(Q(i), V(j)): Expr.zero() for i, j in itertools.product(INDICES, INDICES)},
    )


def _canonical() -> Axiom:
    return Axiom(
        id="canonical",
        description="[Q_i, P_j] = i hbar delta_ij Id",
        comms={
            (Q(i), P(j)): Expr.scalar(_IHBAR) if i == j else Expr.zero()
            for i, j in itertools.product(INDICES, INDICES)
        },
    )


def _velocity_definition() -> Axiom:
    return Axiom(
        id="velocity_definition",
        description="V_i = c^2 H^-1 P_i",
        defs={V(i): Expr.product(H(-1), P(i), coeff=Scalar.of(c=2)) for i in INDICES},
    )


def _light_speed() -> Axiom:
    lhs = sum_exprs(Expr.product(V(j), V(j)) for j in INDICES)
    return Axiom(
        id="light_speed",
        description="sum_j V_j V_j = c^2 Id",
        relations=((lhs, Expr.factor(IDENTITY, Scalar.of(c=2))),),
    )


def _qv_momentum_function() -> Axiom:
    # [Q_i, V_j] taken to be some function of H and P: it commutes with every V_k
    relations = []
    for i, j, k in itertools.product(INDICES, repeat=3):
        qv = Bracket(Expr.factor(Q(i)), Expr.factor(V(j)))
        relations.append((Expr((Term(ONE, (V(k), qv)),)), Expr((Term(ONE, (qv, V(k))),))))
        relations.append((Expr.factor(Bracket(Expr.factor(qv), Expr.factor(V(k)))), Expr.zero()))
    return Axiom(
        id="qv_momentum_function",
        description="[Q_i, V_j] is a function of H and P, so it commutes with V_k",
        relations=tuple(relations),
    )


CATALOGUE: dict[str, Axiom] = {
    ax.id: ax
    for ax in (
        _heisenberg(),
        _velocity_constant(),
        Axiom(
            id="free_particle",
            description="H and P_i commute pairwise",
            families=(frozenset({AtomKind.H, AtomKind.P}),),
        ),
        Axiom(
            id="velocity_family",
            description="H, P_i and V_i commute pairwise",
            families=(frozenset({AtomKind.H, AtomKind.P, AtomKind.V}),),
        ),
        _velocity_definition(),
        _light_speed(),
        _canonical(),
        _qv_momentum_function(),
    )
}


def axiom_set(name: str, ids: Iterable[str]) -> AxiomSet:
    """Build an AxiomSet from catalogue ids."""
    ids = list(ids)
    unknown = [i for i in ids if i not in CATALOGUE]
    if unknown:
        raise KeyError(f"unknown axiom id(s): {', '.join(unknown)}")
    return AxiomSet.from_axioms(name, (CATALOGUE[i] for i in ids))


MASSLESS_IDS = (
    "heisenberg",
    "velocity_constant",
    "free_particle",
    "velocity_family",
    "velocity_definition",
    "light_speed",
)
MASSIVE_IDS = ("heisenberg", "canonical", "free_particle", "velocity_family", "velocity_definition")

MASSLESS = axiom_set("Massless", MASSLESS_IDS)
MASSIVE = axiom_set("Massive", MASSIVE_IDS)
# Leibniz rule plus the Heisenberg equation only: [Q_i, V_j] stays opaque.
LEIBNIZ = axiom_set("Leibniz", ("heisenberg",))

BUILTIN_AXIOM_SETS: dict[str, AxiomSet] = {s.name: s for s in (MASSLESS, MASSIVE, LEIBNIZ)}

__all__ = [
    "Axiom",
    "AxiomSet",
    "BUILTIN_AXIOM_SETS",
    "CATALOGUE",
    "LEIBNIZ",
    "MASSIVE",
    "MASSIVE_IDS",
    "MASSLESS",
    "MASSLESS_IDS",
    "axiom_set",
]
