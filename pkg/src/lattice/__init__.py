"""
Lattice Module

ADR Note: Geometry of Z and Z^2 shared by every analysis: finite sets,
box sequences, patterns, period lattices and configurations.
"""

from .types import (
    Cell,
    FiniteSet,
    BoxFolner,
    Pattern,
    PeriodLattice,
    ConstantBackground,
    PeriodicBackground,
    Configuration,
    as_cell,
)
from .geometry import (
    minkowski,
    interior,
    boundary,
    shift,
    restrict,
    translate,
    negate,
    dependency_hull,
)

__all__ = [
    "Cell",
    "FiniteSet",
    "BoxFolner",
    "Pattern",
    "PeriodLattice",
    "ConstantBackground",
    "PeriodicBackground",
    "Configuration",
    "as_cell",
    "minkowski",
    "interior",
    "boundary",
    "shift",
    "restrict",
    "translate",
    "negate",
    "dependency_hull",
]
