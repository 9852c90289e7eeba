"""
Momentum-space finite-difference realization of the operator algebra.
"""

from opalg.numeric.cases import case_ids, convergence, get_case, measure_level, residual_case
from opalg.numeric.cross_oracle import generate_expressions
from opalg.numeric.grid import MomentumGrid, WaveFunction, gaussian, trial_family
from opalg.numeric.models import GridSpec, ResidualReport, ResidualRow
from opalg.numeric.operators import (
    OperatorDesc,
    OperatorKind,
    apply,
    apply_chain,
    apply_expr,
    canonical_position,
    commutator_apply,
    hamiltonian,
    momentum,
    photon_position,
    velocity,
)

__all__ = [
    "GridSpec",
    "MomentumGrid",
    "OperatorDesc",
    "OperatorKind",
    "ResidualReport",
    "ResidualRow",
    "WaveFunction",
    "apply",
    "apply_chain",
    "apply_expr",
    "canonical_position",
    "case_ids",
    "commutator_apply",
    "convergence",
    "gaussian",
    "generate_expressions",
    "get_case",
    "hamiltonian",
    "measure_level",
    "momentum",
    "photon_position",
    "residual_case",
    "trial_family",
    "velocity",
]
