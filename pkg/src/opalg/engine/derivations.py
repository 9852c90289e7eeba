"""
Built-in derivations: the position-momentum commutator for massless particles,
step by step, as replayable checks.

Derivations are registered via the @derivation decorator with the axiom ids they
may use. `replay` hands each builder an accessor that refuses any axiom outside
that list, so e.g. the Leibniz expansion cannot silently use [Q_i, V_j] = 0.

    eq3          [Q_i, P_j] = [Q_i, c^-2 H V_j] = (i hbar/c^2) V_i V_j + c^-2 H [Q_i, V_j]
    eq5          with [Q_i, V_j] = 0 the bracket term drops
    eq6          substituting V = c^2 H^-1 P gives i hbar c^2 H^-2 P_i P_j
    sectionA_I   sum_j [Q_i, V_j V_j] by Leibniz, and = 0 under sum_j V_j^2 = c^2 Id
    sectionA_II  [V_i, V_j] = 0 via definitions; d/dt [Q_i, V_j] = 0; with [Q_i, V_j] a
                 function of H and P, [[Q_i, dQ_j/dt], dQ_j/dt] = 0 and
                 sum_k [Q_i, V_k] V_k = 1/2 [Q_i, sum_k V_k V_k]
    dsquare      d^2 Q_j / dt^2 = 0
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from opalg import config
from opalg.algebra import (
    HBAR,
    INDICES,
    Bracket,
    Expr,
    H,
    I,
    P,
    Q,
    Scalar,
    Term,
    V,
    scalar_mul,
    sum_exprs,
)
from opalg.engine.axioms import AxiomSet, axiom_set
from opalg.engine.expand import (
    commutator,
    ddt,
    equivalent,
    expand,
    substitute_velocity,
    time_derivative,
)
from opalg.engine.models import CheckResult, IndexOutcome, StepOutcome
from opalg.errors import OpalgError, UnknownCase

logger = logging.getLogger(__name__)

_IHBAR = I * HBAR
_C_MINUS_2 = Scalar.of(c=-2)


class AxiomNotPermitted(OpalgError):
    """A derivation asked for an axiom outside its declared requirements."""


class Axioms:
    """Hands out axiom subsets, restricted to a derivation's requirements."""

    def __init__(self, allowed: frozenset[str], override: AxiomSet | None = None) -> None:
        self.allowed = allowed
        self.override = override

    def subset(self, *ids: str) -> AxiomSet:
        if self.override is not None:
            return self.override
        extra = set(ids) - self.allowed
        if extra:
            raise AxiomNotPermitted(f"axiom(s) {sorted(extra)} not in requirements {sorted(self.allowed)}")
        return axiom_set("+".join(ids) or "empty", ids)


Step = tuple[str, AxiomSet, Expr, Expr]
Builder = Callable[[Axioms, tuple[int, ...]], list[Step]]


@dataclass(frozen=True)
class Derivation:
    id: str
    description: str
    axiom_requirements: frozenset[str]
    arity: int
    build: Builder

    def indices(self) -> list[tuple[int, ...]]:
        return list(itertools.product(INDICES, repeat=self.arity))


_DERIVATIONS: dict[str, Derivation] = {}


def derivation(id: str, requires: Iterable[str], arity: int = 2, description: str = ""):
    """Decorator to register a derivation builder."""

    def decorator(fn: Builder) -> Builder:
        _DERIVATIONS[id] = Derivation(
            id=id,
            description=description or (fn.__doc__ or "").strip().splitlines()[0],
            axiom_requirements=frozenset(requires),
            arity=arity,
            build=fn,
        )
        return fn

    return decorator


def get_derivation(id: str) -> Derivation:
    try:
        return _DERIVATIONS[id]
    except KeyError:
        raise UnknownCase(f"unknown derivation {id!r}; known: {', '.join(_DERIVATIONS)}") from None


def derivation_ids() -> list[str]:
    return list(_DERIVATIONS)


# ---------------------------------------------------------------------------
# Shared shapes
# ---------------------------------------------------------------------------


def _momentum_as_velocity(j: int) -> Expr:
    """P_j = (H / c^2) dQ_j/dt, written as c^-2 H V_j."""
    return Expr.product(H(), V(j), coeff=_C_MINUS_2)


def _raw(*factors, coeff: Scalar) -> Expr:
    """Single term kept in the written order; the engine normalizes it per axiom set."""
    return Expr((Term(coeff, tuple(factors)),))


def _eq5_shape(i: int, j: int) -> Expr:
    return _raw(V(i), V(j), coeff=_IHBAR * _C_MINUS_2)


def _eq6_shape(i: int, j: int) -> Expr:
    return Expr.product(H(-2), P(i), P(j), coeff=_IHBAR * Scalar.of(c=2))


def _opaque_qv(i: int, j: int) -> Expr:
    return commutator(Q(i), V(j))


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------


@derivation("eq3", requires=("heisenberg",))
def _eq3(axioms: Axioms, idx: tuple[int, ...]) -> list[Step]:
    """Leibniz expansion of [Q_i, P_j], valid for massless and massive particles."""
    i, j = idx
    ax = axioms.subset("heisenberg")
    lhs = expand(commutator(Q(i), _momentum_as_velocity(j)), ax, form="velocity")
    bracket = Bracket(Expr.factor(Q(i)), Expr.factor(V(j)))
    shape = Expr(_eq5_shape(i, j).terms + _raw(H(), bracket, coeff=_C_MINUS_2).terms)
    return [("leibniz", ax, lhs, expand(shape, ax, form="velocity"))]


@derivation("eq5", requires=("heisenberg", "velocity_constant"))
def _eq5(axioms: Axioms, idx: tuple[int, ...]) -> list[Step]:
    """With [Q_i, V_j] = 0 the Leibniz expansion collapses to (i hbar/c^2) V_i V_j."""
    i, j = idx
    ax = axioms.subset("heisenberg", "velocity_constant")
    lhs = expand(commutator(Q(i), _momentum_as_velocity(j)), ax, form="velocity")
    return [("velocity-form", ax, lhs, _eq5_shape(i, j))]


_EQ6_IDS = ("heisenberg", "velocity_constant", "free_particle", "velocity_family", "velocity_definition")


@derivation("eq6", requires=_EQ6_IDS)
def _eq6(axioms: Axioms, idx: tuple[int, ...]) -> list[Step]:
    """Momentum form i hbar c^2 H^-2 P_i P_j of the massless commutator."""
    i, j = idx
    ax = axioms.subset(*_EQ6_IDS)
    velocity_form = expand(commutator(Q(i), _momentum_as_velocity(j)), ax, form="velocity")
    direct = expand(commutator(Q(i), P(j)), ax, form="momentum")
    return [
        ("substitute-velocity", ax, substitute_velocity(velocity_form, ax), _eq6_shape(i, j)),
        ("direct", ax, direct, _eq6_shape(i, j)),
    ]


@derivation("sectionA_I", requires=("heisenberg", "light_speed"), arity=1)
def _section_a_one(axioms: Axioms, idx: tuple[int, ...]) -> list[Step]:
    """sum_j [Q_i, V_j V_j] by Leibniz alone, and its vanishing under sum_j V_j^2 = c^2."""
    (i,) = idx
    leibniz = axioms.subset("heisenberg")
    lhs = expand(
        sum_exprs(commutator(Q(i), Expr.product(V(j), V(j))) for j in INDICES),
        leibniz,
        form="velocity",
    )
    rhs = expand(
        sum_exprs(_opaque_qv(i, j) * V(j) + Expr.factor(V(j)) * _opaque_qv(i, j) for j in INDICES),
        leibniz,
        form="velocity",
    )
    constrained = axioms.subset("heisenberg", "light_speed")
    speed = sum_exprs(Expr.product(V(j), V(j)) for j in INDICES)
    vanishing = expand(commutator(Q(i), speed), constrained, form="velocity")
    return [
        ("leibniz", leibniz, lhs, rhs),
        ("light-speed", constrained, vanishing, Expr.zero()),
    ]


_SECTION_A_II_IDS = (
    "heisenberg",
    "free_particle",
    "velocity_family",
    "velocity_definition",
    "qv_momentum_function",
)
_HALF = Scalar.of(Fraction(1, 2))


@derivation("sectionA_II", requires=_SECTION_A_II_IDS)
def _section_a_two(axioms: Axioms, idx: tuple[int, ...]) -> list[Step]:
    """[V_i, V_j] = 0 through V = c^2 H^-1 P, d/dt [Q_i, V_j] = 0, and the double bracket."""
    i, j = idx
    defs = axioms.subset("free_particle", "velocity_definition")
    vv = commutator(V(i), V(j))
    dynamics = axioms.subset("heisenberg", "velocity_family")
    # [Q_i, V_j] as a function of H and P
    hypothesis = axioms.subset("heisenberg", "qv_momentum_function")
    dq = time_derivative(Q(j))
    speed = sum_exprs(Expr.product(V(k), V(k)) for k in INDICES)
    split = sum_exprs(_opaque_qv(i, k) * V(k) for k in INDICES)
    return [
        ("velocity-commute", defs, expand(vv, defs, form="velocity"), Expr.zero()),
        ("momentum-commute", defs, expand(substitute_velocity(vv, defs), defs), Expr.zero()),
        ("bracket-constant", dynamics, ddt(_opaque_qv(i, j), dynamics), Expr.zero()),
        (
            "product-rule",
            dynamics,
            expand(vv + commutator(Q(i), time_derivative(V(j))), dynamics, form="velocity"),
            Expr.zero(),
        ),
        (
            "double-bracket",
            hypothesis,
            expand(commutator(commutator(Q(i), dq), dq), hypothesis, form="velocity"),
            Expr.zero(),
        ),
        # sum_k [Q_i, V_k] V_k is half of [Q_i, sum_k V_k V_k], which light-speed sets to 0
        (
            "speed-split",
            hypothesis,
            expand(split, hypothesis, form="velocity"),
            scalar_mul(_HALF, expand(commutator(Q(i), speed), hypothesis, form="velocity"), hypothesis.families),
        ),
    ]


@derivation("dsquare", requires=("heisenberg", "velocity_family"), arity=1)
def _dsquare(axioms: Axioms, idx: tuple[int, ...]) -> list[Step]:
    """dQ_j/dt = V_j and d^2 Q_j/dt^2 = 0."""
    (j,) = idx
    ax = axioms.subset("heisenberg", "velocity_family")
    velocity = ddt(Expr.factor(Q(j)), ax)
    return [
        ("velocity", ax, velocity, Expr.factor(V(j))),
        ("acceleration", ax, ddt(velocity, ax), Expr.zero()),
    ]


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------


def _run_index(d: Derivation, axioms: Axioms, idx: tuple[int, ...]) -> IndexOutcome:
    steps = []
    for label, ax, lhs, rhs in d.build(axioms, idx):
        ok = equivalent(lhs, rhs, ax)
        if not ok:
            logger.info("%s %s step %s failed under %s: %s != %s", d.id, idx, label, ax.name, lhs, rhs)
        steps.append(StepOutcome(label=label, axioms=ax.name, lhs=lhs, rhs=rhs, passed=ok))
    return IndexOutcome(index=idx, steps=tuple(steps))


def replay(
    d: Derivation | str,
    axioms: AxiomSet | None = None,
    workers: int | None = None,
) -> CheckResult:
    """
    Replay a derivation over every index tuple.

    By default each step uses only the derivation's listed axioms; `axioms`
    replaces every step's set (used to show that eq5 fails for the Massive set).
    """
    d = get_derivation(d) if isinstance(d, str) else d
    access = Axioms(d.axiom_requirements, override=axioms)
    indices = d.indices()
    with ThreadPoolExecutor(max_workers=workers or config.WORKERS, thread_name_prefix="opalg_replay") as pool:
        outcomes = list(pool.map(lambda idx: _run_index(d, access, idx), indices))
    result = CheckResult(
        derivation_id=d.id,
        axioms=axioms.name if axioms is not None else "+".join(sorted(d.axiom_requirements)),
        outcomes=outcomes,
    )
    logger.info("replay %s: %s index tuples passed", d.id, result.summary)
    return result
