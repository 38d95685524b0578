"""
NUCA Window Engine

ADR Note: Everything here rests on locality: tau(x)|_F depends only on
x|_{F+M}. A WindowMap fixes F, the input window F+M, the neighbor columns of
every output cell and the rule index of every output cell, then maps whole
(N, |F+M|) input blocks to (N, |F|) output blocks.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Set

import numpy as np

from ..density.lattice_set import finite_cells
from ..lattice.geometry import minkowski, restrict
from ..lattice.types import Configuration, FiniteSet, Pattern
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import encode_rows, fits_codes, map_blocks, decode_codes, row_blocks
from ..utils.errors import PreconditionFailed
from .types import Cylinder, RuleAssignment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WindowMap:
    """tau restricted to an output window F"""
    nuca: RuleAssignment
    F: FiniteSet

    @cached_property
    def domain(self) -> FiniteSet:
        """F + M"""
        return minkowski(self.F, self.nuca.memory)

    @cached_property
    def neighbors(self) -> np.ndarray:
        """(|F|, |M|) column indices into `domain`"""
        index = self.domain.index
        memory = self.nuca.memory.cells
        return np.asarray(
            [[index[tuple(a + b for a, b in zip(f, m))] for m in memory] for f in self.F.cells],
            dtype=np.int64,
        ).reshape(len(self.F), len(memory))

    @cached_property
    def rule_ids(self) -> np.ndarray:
        return self.nuca.rule_index_many(self.F.as_array())

    @cached_property
    def _weights(self) -> np.ndarray:
        size = len(self.nuca.memory)
        return np.asarray([self.nuca.q ** (size - 1 - j) for j in range(size)], dtype=np.int64)

    def apply(self, inputs: np.ndarray) -> np.ndarray:
        """Outputs on F for each row of an (N, |F+M|) input block"""
        outputs = np.zeros((inputs.shape[0], len(self.F)), dtype=np.uint8)
        tables = [t.array for t in self.nuca.tables]
        wide = inputs.astype(np.int64)
        for column, (neighbors, rule) in enumerate(zip(self.neighbors, self.rule_ids)):
            codes = wide[:, neighbors] @ self._weights
            outputs[:, column] = tables[rule][codes]
        return outputs


def evaluate_window(nuca: RuleAssignment, x: Configuration, F: FiniteSet) -> Pattern:
    """tau(x)|_F, reading x only on F + M"""
    if not F:
        return Pattern.empty(F.d)
    window = WindowMap(nuca, F)
    inputs = restrict(x, window.domain)
    outputs = window.apply(np.asarray([inputs.values], dtype=np.uint8))
    return Pattern.from_row(F, outputs[0])


def cylinder_inputs(
    domain: FiniteSet,
    q: int,
    u: Optional[Cylinder],
    budget: EnumerationBudget,
    what: str,
    fixed: Optional[Pattern] = None,
):
    """
    Input blocks on `domain`: free cells enumerated, pinned cells set to p

    Cells of `fixed` are held at its values as well (used for fillers).

    Yields:
        uint8 blocks of shape (rows, |domain|) in lexicographic order of the
        free cells
    """
    if u is None:
        free, pinned = domain, Pattern.empty(domain.d)
    else:
        free, pinned = u.split(domain)
    if fixed is not None and fixed.support:
        pinned_map = dict(pinned.mapping)
        pinned_map.update({c: v for c, v in fixed.mapping.items() if c in free.members})
        free = free - fixed.support
        pinned = Pattern.from_mapping(pinned_map, d=domain.d) if pinned_map else Pattern.empty(domain.d)
    budget.check_rows(q ** len(free), what)
    free_columns = np.asarray([domain.index[c] for c in free.cells], dtype=np.int64)
    pinned_columns = np.asarray([domain.index[c] for c in pinned.support.cells], dtype=np.int64)
    pinned_values = np.asarray(pinned.values, dtype=np.uint8)
    for block in row_blocks(q, len(free)):
        inputs = np.zeros((block.shape[0], len(domain)), dtype=np.uint8)
        if free_columns.size:
            inputs[:, free_columns] = block
        if pinned_columns.size:
            inputs[:, pinned_columns] = pinned_values
        yield inputs


def image_codes(
    nuca: RuleAssignment,
    F: FiniteSet,
    u: Optional[Cylinder] = None,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> np.ndarray:
    """
    Sorted distinct codes of the patterns in Gamma_F (restricted to U)

    Raises:
        BudgetExceeded: q^{|F+M minus S|} exceeds max_patterns
    """
    if not fits_codes(nuca.q, len(F)):
        raise PreconditionFailed(f"window of {len(F)} cells is too large to index image patterns")
    if not F:
        return np.zeros(1, dtype=np.int64)
    window = WindowMap(nuca, F)
    budget.check_window(len(window.domain), "image window input")

    def block_codes(inputs: np.ndarray) -> np.ndarray:
        budget.check_deadline()
        return np.unique(encode_rows(window.apply(inputs), nuca.q))

    blocks = cylinder_inputs(window.domain, nuca.q, u, budget, f"image of {len(F)}-cell window")
    parts = map_blocks(block_codes, blocks, budget.threads)
    codes = np.unique(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.int64)
    logger.debug(f"image window of {len(F)} cells: {codes.size} patterns")
    return codes


def image_rows(
    nuca: RuleAssignment,
    F: FiniteSet,
    u: Optional[Cylinder] = None,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> np.ndarray:
    """Gamma_F as an (|Gamma_F|, |F|) block in lexicographic order"""
    return decode_codes(image_codes(nuca, F, u, budget), nuca.q, len(F))


def image_window(
    nuca: RuleAssignment,
    F: FiniteSet,
    u: Optional[Cylinder] = None,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> Set[Pattern]:
    """
    {tau(x)|_F : x in U} exactly

    ADR Note: Computed by enumerating x on F + M (pinned to p on S when a
    cylinder is given); exact by locality. Oversized requests raise
    BudgetExceeded instead of returning a truncated set.
    """
    return {Pattern.from_row(F, row) for row in image_rows(nuca, F, u, budget)}


def image_open_probe(
    nuca: RuleAssignment,
    E: FiniteSet,
    W: FiniteSet,
    u: Optional[Cylinder] = None,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> Optional[Pattern]:
    """
    First q on E (lexicographic) with {q} x A^{W minus E} inside Gamma_W

    Returns None when no q on E passes for this (E, W); that is evidence for
    this window pair only.
    """
    if not E.issubset(W):
        raise PreconditionFailed("probe support E must lie inside the window W")
    rows = image_rows(nuca, W, u, budget)
    e_columns = [W.index[c] for c in E.cells]
    needed = nuca.q ** (len(W) - len(E))
    e_codes = encode_rows(rows[:, e_columns], nuca.q)
    values, counts = np.unique(e_codes, return_counts=True)
    accepted = values[counts == needed]
    if accepted.size == 0:
        logger.info(f"open probe: no pattern on {len(E)} cells has all {needed} extensions in the image")
        return None
    q_row = decode_codes(accepted[:1], nuca.q, len(E))[0]
    return Pattern.from_row(E, q_row)


def perturbation_support(nuca: RuleAssignment) -> Optional[FiniteSet]:
    """
    Cells whose rule differs from the default, for asymptotically constant NUCA

    Returns None unless every region is provably finite.
    """
    cells = FiniteSet.empty(nuca.d)
    for region, _ in nuca.regions:
        region_cells = finite_cells(region)
        if region_cells is None:
            return None
        cells = cells | region_cells
    if not cells:
        return cells
    rule_ids = nuca.rule_index_many(cells.as_array())
    tables = nuca.tables
    differing = tuple(c for c, r in zip(cells.cells, rule_ids) if not tables[int(r)].same_map(nuca.default))
    return FiniteSet(nuca.d, differing)
