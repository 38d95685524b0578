"""
Quasi-Tiling Module

ADR Note: Finite-region quasi-tilings with interiors T° = interior(T, M),
consumed by the linear locus extraction.
"""

from .types import Tile, QuasiTiling, TilingVerdict, ClauseVerdict
from .builder import (
    construct,
    verify,
    ab_covering_check,
    boundary_slack,
    tiling_to_payload,
    tiling_from_payload,
)

__all__ = [
    "Tile",
    "QuasiTiling",
    "TilingVerdict",
    "ClauseVerdict",
    "construct",
    "verify",
    "ab_covering_check",
    "boundary_slack",
    "tiling_to_payload",
    "tiling_from_payload",
]
