"""
Commutator expansion, Heisenberg derivatives and the built-in derivations.
"""

from opalg.engine.axioms import (
    BUILTIN_AXIOM_SETS,
    CATALOGUE,
    LEIBNIZ,
    MASSIVE,
    MASSLESS,
    Axiom,
    AxiomSet,
    axiom_set,
)
from opalg.engine.derivations import (
    AxiomNotPermitted,
    Derivation,
    derivation_ids,
    get_derivation,
    replay,
)
from opalg.engine.expand import (
    commutator,
    ddt,
    equivalent,
    expand,
    substitute_velocity,
    time_derivative,
)
from opalg.engine.models import CheckResult, IndexOutcome, StepOutcome

__all__ = [
    "Axiom",
    "AxiomNotPermitted",
    "AxiomSet",
    "BUILTIN_AXIOM_SETS",
    "CATALOGUE",
    "CheckResult",
    "Derivation",
    "IndexOutcome",
    "LEIBNIZ",
    "MASSIVE",
    "MASSLESS",
    "StepOutcome",
    "axiom_set",
    "commutator",
    "ddt",
    "derivation_ids",
    "equivalent",
    "expand",
    "get_derivation",
    "replay",
    "substitute_velocity",
    "time_derivative",
]
