"""
Density Module

ADR Note: Set algebra over Z^d with exact natural and Banach densities where
a closed form exists and labeled brackets or estimates elsewhere.
"""

from .lattice_set import (
    LatticeSet,
    FiniteAtom,
    CosetAtom,
    HalfSpaceAtom,
    PowerAtom,
    Universe,
    Translated,
    Union,
    Intersection,
    Complement,
    Difference,
    empty_set,
    finite,
    coset,
    half_space,
    members_in,
    finite_cells,
)
from .parser import parse_lattice_set, format_expression
from .calculator import (
    natural_density,
    banach_density,
    density_laws_check,
    window_count,
    periodic_density,
)
from .types import Bracket, DensityValue, DensityReport, DensityMethod, LawsVerdict

__all__ = [
    "LatticeSet",
    "FiniteAtom",
    "CosetAtom",
    "HalfSpaceAtom",
    "PowerAtom",
    "Universe",
    "Translated",
    "Union",
    "Intersection",
    "Complement",
    "Difference",
    "empty_set",
    "finite",
    "coset",
    "half_space",
    "members_in",
    "finite_cells",
    "parse_lattice_set",
    "format_expression",
    "natural_density",
    "banach_density",
    "density_laws_check",
    "window_count",
    "periodic_density",
    "Bracket",
    "DensityValue",
    "DensityReport",
    "DensityMethod",
    "LawsVerdict",
]
