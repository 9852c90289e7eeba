"""
opalg: exact noncommutative operator algebra for position/momentum commutators.

Symbolic commutator expansion under declared axioms, a small script language
for derivation checks, and a momentum-space finite-difference lab that
confirms the symbolic results numerically.
"""

__version__ = "0.1.0"
