"""
Quasi-Tiling Construction and Verification

ADR Note: Greedy multi-scale placement on a box region. Shapes are tried
largest first; for each shape every translate inside the region is visited
in canonical (lexicographic) order of its offset and placed when

    |T ∩ covered| < epsilon |T|      (T is epsilon-disjoint from what is covered)
    T° ∩ earlier interiors = ∅

Coverage and interiors are tracked on numpy boolean grids over the region, so
each candidate costs one fancy-indexing read of |T| cells.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..lattice.geometry import interior
from ..lattice.types import FiniteSet
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.errors import PreconditionFailed
from ..utils.rational import format_rational, parse_rational
from .types import ClauseVerdict, QuasiTiling, Tile, TilingVerdict

logger = logging.getLogger(__name__)


def _region_grid(region: FiniteSet) -> Tuple[np.ndarray, Tuple[int, ...]]:
    if not region.is_box():
        raise PreconditionFailed("quasi-tilings are built on box regions")
    lows, highs = region.hull()
    return np.asarray(lows, dtype=np.int64), tuple(h - l + 1 for l, h in zip(lows, highs))


def _grid_index(offsets: np.ndarray) -> Tuple[np.ndarray, ...]:
    return tuple(offsets[:, i] for i in range(offsets.shape[1]))


def construct(
    shapes: Sequence[FiniteSet],
    epsilon: Fraction,
    M: FiniteSet,
    region: FiniteSet,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> QuasiTiling:
    """
    epsilon-disjoint quasi-tiling of `region` by translates of `shapes`

    Returns:
        QuasiTiling with `epsilon` set; `covering` and `deficit` report what
        the greedy scan achieved

    Raises:
        PreconditionFailed: epsilon outside (0, 1), region not a box, or no
            shape fits inside the region
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise PreconditionFailed(f"epsilon must lie in (0, 1), got {epsilon}")
    if not shapes:
        raise PreconditionFailed("at least one shape is required")
    for shape in shapes:
        if not shape or shape.d != region.d:
            raise PreconditionFailed("shapes must be nonempty subsets of the region's lattice")
    base, extents = _region_grid(region)
    covered = np.zeros(extents, dtype=bool)
    interiors = np.zeros(extents, dtype=bool)

    region_lows = tuple(int(v) for v in base)
    region_highs = tuple(int(b + e - 1) for b, e in zip(base, extents))
    order = sorted(range(len(shapes)), key=lambda i: (-len(shapes[i]), i))
    fitting = False
    tiles: List[Tile] = []

    for shape_index in order:
        shape = shapes[shape_index]
        lows, highs = shape.hull()
        start = [rl - sl for rl, sl in zip(region_lows, lows)]
        stop = [rh - sh for rh, sh in zip(region_highs, highs)]
        if any(a > b for a, b in zip(start, stop)):
            logger.debug(f"shape {shape_index} ({len(shape)} cells) does not fit the region")
            continue
        fitting = True
        cells = shape.as_array() - base
        inner = interior(shape, M)
        inner_cells = inner.as_array() - base if inner else np.zeros((0, region.d), dtype=np.int64)
        limit = epsilon * len(shape)
        placed = 0
        for center in FiniteSet.rect(start, stop).cells:
            offset = np.asarray(center, dtype=np.int64)
            overlap = int(covered[_grid_index(cells + offset)].sum())
            if overlap >= limit:
                continue
            if inner_cells.shape[0] and interiors[_grid_index(inner_cells + offset)].any():
                continue
            covered[_grid_index(cells + offset)] = True
            if inner_cells.shape[0]:
                interiors[_grid_index(inner_cells + offset)] = True
            tiles.append(Tile.place(center, shape_index, shape, M))
            placed += 1
        budget.check_deadline(f"{len(tiles)} tiles placed")
        logger.debug(f"shape {shape_index}: {placed} translates placed")

    if not fitting:
        raise PreconditionFailed("every shape is larger than the region")
    tiling = QuasiTiling(tuple(tiles), tuple(shapes), M, region, epsilon)
    logger.info(
        f"quasi-tiling: {len(tiles)} tiles from {len(tiling.shapes_used)} shapes, "
        f"covering {float(tiling.covering):.4f} (deficit {format_rational(tiling.deficit or 0)})"
    )
    return tiling


def _interiors_disjoint(tiling: QuasiTiling) -> Tuple[bool, int]:
    """(disjoint?, number of cells lying in two or more interiors)"""
    total = sum(len(t.interior) for t in tiling.tiles)
    union = set()
    for tile in tiling.tiles:
        union.update(tile.interior.cells)
    return total == len(union), total - len(union)


def verify(tiling: QuasiTiling, alpha: Fraction, beta: Fraction) -> TilingVerdict:
    """
    The three clauses of an alpha-disjoint, beta-covering quasi-tiling

    (i) |T°| > (1 - alpha)|T| per tile; (ii) interiors pairwise disjoint;
    (iii) |covered ∩ region| >= beta |region|.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    ratios = [Fraction(len(t.interior), len(t.cells)) for t in tiling.tiles]
    bad_tiles = [i for i, r in enumerate(ratios) if not r > 1 - alpha]
    disjoint, overlap = _interiors_disjoint(tiling)
    covering = tiling.covering

    clauses = [
        ClauseVerdict(
            name="interior_subset",
            passed=not bad_tiles,
            measured=min(ratios) if ratios else None,
            detail=f"tiles failing: {bad_tiles[:10]}" if bad_tiles else "",
        ),
        ClauseVerdict(
            name="interior_disjoint",
            passed=disjoint,
            detail=f"{overlap} cells in more than one interior" if not disjoint else "",
        ),
        ClauseVerdict(name="covering", passed=covering >= beta, measured=covering),
    ]
    verdict = TilingVerdict(
        passed=all(c.passed for c in clauses),
        alpha=alpha,
        beta=beta,
        clauses=clauses,
        tiles=len(tiling.tiles),
        shapes_used=tiling.shapes_used,
    )
    logger.info(f"tiling verify(alpha={alpha}, beta={beta}): {'pass' if verdict.passed else 'fail'}")
    return verdict


def boundary_slack(tiling: QuasiTiling) -> Fraction:
    """
    Share of the region within reach of its border for the largest shape

    Cells closer to the border than the largest shape's extent can be left
    uncovered by any placement scheme; the covering bound is read up to this
    share.
    """
    if not tiling.shapes or not tiling.region:
        return Fraction(0)
    _, extents = _region_grid(tiling.region)
    largest = max(tiling.shapes, key=len)
    lows, highs = largest.hull()
    inner = 1
    for extent, lo, hi in zip(extents, lows, highs):
        inner *= max(0, extent - 2 * (hi - lo))
    return 1 - Fraction(inner, len(tiling.region))


def ab_covering_check(
    tiling: QuasiTiling,
    alpha: Fraction,
    beta: Fraction,
    tolerance: Optional[Fraction] = None,
) -> TilingVerdict:
    """
    Do the interiors cover at least alpha * beta of the region?

    The hypothesis is read non-strictly: |T°| >= alpha |T| per tile,
    interiors pairwise disjoint and covering >= beta. `tolerance` defaults to
    the boundary slack of the region.

    Raises:
        PreconditionFailed: the tiling does not meet the hypothesis
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    short = [i for i, t in enumerate(tiling.tiles) if len(t.interior) < alpha * len(t.cells)]
    disjoint, overlap = _interiors_disjoint(tiling)
    if short:
        raise PreconditionFailed(f"{len(short)} tiles have |T°| < {alpha}|T| (first: tile {short[0]})")
    if not disjoint:
        raise PreconditionFailed(f"interiors overlap on {overlap} cells")
    if tiling.covering < beta:
        raise PreconditionFailed(f"tiles cover {tiling.covering} of the region, below beta = {beta}")

    slack = boundary_slack(tiling)
    allowed = Fraction(tolerance) if tolerance is not None else slack
    measured = tiling.interior_covering
    passed = measured >= alpha * beta - allowed
    verdict = TilingVerdict(
        passed=passed,
        alpha=alpha,
        beta=beta,
        clauses=[
            ClauseVerdict(
                name="ab_covering",
                passed=passed,
                measured=measured,
                detail=f"needs {format_rational(alpha * beta)} up to {format_rational(allowed)}",
            )
        ],
        tiles=len(tiling.tiles),
        shapes_used=tiling.shapes_used,
        metadata={"boundary_slack": format_rational(slack), "tolerance": format_rational(allowed)},
    )
    logger.info(f"ab-covering check: interiors cover {float(measured):.4f}, {'pass' if passed else 'fail'}")
    return verdict


def tiling_to_payload(tiling: QuasiTiling) -> Dict[str, Any]:
    """Centers and shape indices plus what is needed to rebuild the tiles"""
    lows, highs = tiling.region.hull()
    return {
        "d": tiling.d,
        "region": {"lows": list(lows), "highs": list(highs)},
        "memory": [list(c) for c in tiling.memory.cells],
        "shapes": [[list(c) for c in shape.cells] for shape in tiling.shapes],
        "tiles": [[list(t.center), t.shape] for t in tiling.tiles],
        "epsilon": format_rational(tiling.epsilon) if tiling.epsilon is not None else None,
    }


def tiling_from_payload(payload: Dict[str, Any]) -> QuasiTiling:
    try:
        d = int(payload["d"])
        region = FiniteSet.rect(payload["region"]["lows"], payload["region"]["highs"])
        memory = FiniteSet.of(payload["memory"], d=d)
        shapes = tuple(FiniteSet.of(cells, d=d) for cells in payload["shapes"])
        tiles = tuple(
            Tile.place(tuple(int(v) for v in center), int(index), shapes[int(index)], memory)
            for center, index in payload["tiles"]
        )
        epsilon = payload.get("epsilon")
    except (KeyError, IndexError, TypeError, ValueError) as e:
        raise PreconditionFailed(f"malformed tiling payload: {e}") from e
    return QuasiTiling(tiles, shapes, memory, region, parse_rational(epsilon) if epsilon is not None else None)
