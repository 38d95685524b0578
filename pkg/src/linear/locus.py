"""
Pre-Injectivity Locus Extraction

ADR Note: Per tile T_i of a quasi-tiling, E_i = interior(T_i, M + M) and the
tile map phi_i sends inputs on E_i + M to outputs on E_i. The null space of
phi_i is reduced to row echelon form; the pivot coordinate of each basis
vector is pinned. A kernel vector vanishing on every pivot is zero, so
phi_i is injective on the remaining inputs, which a second rank computation
confirms. Tile interiors are disjoint and E_i + M lies inside T_i°, so a
configuration supported on the free cells and killed by sigma restricts to a
kernel vector of some phi_i with pinned coordinates zero, hence is zero.
"""

import logging
from fractions import Fraction
from typing import List

from ..density.lattice_set import Complement, FiniteAtom, LatticeSet
from ..lattice.geometry import interior, minkowski, union_all
from ..lattice.types import FiniteSet
from ..quasitiling.types import QuasiTiling, Tile
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import map_blocks
from ..utils.errors import PreconditionFailed
from .field import nullspace, nullspace_pivots, rank
from .types import LinearAssignment, LocusCertificate, TileLocus
from .window import window_matrix

logger = logging.getLogger(__name__)


def _tile_locus(nuca: LinearAssignment, index: int, tile: Tile, M2: FiniteSet, budget: EnumerationBudget) -> TileLocus:
    E = interior(tile.cells, M2)
    if not E:
        logger.debug(f"tile {index} at {tile.center}: too small for M + M, skipped")
        return TileLocus(index, tile.center, 0, 0, 0, FiniteSet.empty(nuca.d), False, skipped=True)
    budget.check_deadline(f"tiles before {index}")
    window = window_matrix(nuca, E, budget)
    basis = nullspace(window.matrix, nuca.q)
    pivots = nullspace_pivots(basis, nuca.q)
    pinned = FiniteSet(nuca.d, tuple(window.domain.cells[c // nuca.k] for c in pivots))
    kept = [
        window.column(c, j)
        for c in window.domain.cells
        if c not in pinned.members
        for j in range(nuca.k)
    ]
    injective = rank(window.matrix[:, kept], nuca.q) == len(kept) if kept else True
    return TileLocus(
        index=index,
        center=tile.center,
        inner_cells=len(E),
        input_cells=len(window.domain),
        kernel_dim=basis.shape[0],
        pinned=pinned,
        injective=injective,
    )


def preinjectivity_locus(
    nuca: LinearAssignment,
    tiling: QuasiTiling,
    d: Fraction,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> LocusCertificate:
    """
    S with sigma pre-injective on {0}^S x K^{G minus S} over the tiled region

    Returns:
        LocusCertificate with S = complement of the free cells (a lattice-set
        expression), per-tile verdicts and the measured density of S on the
        working region

    Raises:
        PreconditionFailed: the tiling lives in another dimension or uses
            another memory set than the NUCA
    """
    if tiling.d != nuca.d:
        raise PreconditionFailed(f"tiling is in Z^{tiling.d}, NUCA in Z^{nuca.d}")
    if tiling.memory != nuca.memory:
        raise PreconditionFailed("tile interiors must be taken with respect to the NUCA's memory set")
    warnings: List[str] = []
    if nuca.k > 1:
        warnings.append(
            f"vector alphabet of dimension {nuca.k}: pinning is done cell by cell, "
            "so S may be larger than the kernel dimension"
        )
        logger.warning(warnings[-1])

    M2 = minkowski(nuca.memory, nuca.memory)
    tiles = map_blocks(
        lambda item: _tile_locus(nuca, item[0], item[1], M2, budget),
        list(enumerate(tiling.tiles)),
        budget.threads,
    )

    free = union_all(
        (minkowski(interior(tiling.tiles[t.index].cells, M2), nuca.memory) - t.pinned for t in tiles if not t.skipped),
        nuca.d,
    )
    S: LatticeSet = Complement(FiniteAtom(free))
    region = tiling.region
    measured = Fraction(len(region - free), len(region)) if region else Fraction(0)
    target = Fraction(d)
    certificate = LocusCertificate(S=S, region=region, tiles=tiles, measured_density=measured, target=target, warnings=warnings)

    if certificate.skipped:
        warnings.append(f"{len(certificate.skipped)} tiles too small for M + M were pinned entirely")
    if not certificate.achieved:
        warnings.append(f"measured density {measured} exceeds the target {target}")
        logger.warning(warnings[-1])
    if not certificate.all_injective:
        raise AssertionError("a tile map stayed non-injective after pinning its null-space pivots")
    logger.info(
        f"locus on {len(region)} cells: {len(tiles)} tiles, pinned density {measured} "
        f"({float(measured):.4f}) against target {target}"
    )
    return certificate
