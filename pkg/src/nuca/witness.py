"""
Pre-injectivity Witness Search

ADR Note: A witness is a finite support E (disjoint from S), two patterns
q1 != q2 on E and a context such that the two completions have the same
image. If x and y agree off E, tau(x) and tau(y) can only differ on the
dependency hull H = E + (-M), and tau on H reads only C = H + M. So for a
fixed E the search is a finite constraint problem over the cells of C:
assign the context once, assign the pair on E, and require equal outputs on
every cell of H.

Search order is deterministic: supports by increasing size, cells ordered by
(sup norm, lexicographic), subsets in combination order; within a support,
cells of C in canonical order with context symbols ascending and symbol
pairs ordered by (q2, q1). The first cell of E carries q2 < q1, so q1 is
always the lexicographically larger pattern.
"""

import logging
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..lattice.geometry import dependency_hull, minkowski, sup_norm_order
from ..lattice.types import Cell, Configuration, FiniteSet, Pattern
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.errors import BudgetExceeded
from .engine import evaluate_window
from .types import Cylinder, PreinjWitness, RuleAssignment, SearchStatus, WitnessSearchResult

logger = logging.getLogger(__name__)

_DEADLINE_STRIDE = 4096


class _SupportProblem:
    """Backtracking over the input cells C for one candidate support E"""

    def __init__(self, nuca: RuleAssignment, u: Cylinder, E: FiniteSet, budget: EnumerationBudget):
        self.nuca = nuca
        self.E = E
        self.budget = budget
        memory = nuca.memory.cells
        self.outputs = dependency_hull(E, nuca.memory)
        self.inputs = minkowski(self.outputs, nuca.memory)
        budget.check_window(len(self.inputs), f"context window of support {list(E.cells)}")

        position = self.inputs.index
        _, pinned = u.split(self.inputs - E)
        self.order: List[Cell] = [c for c in self.inputs.cells if c not in pinned.support.members]
        self.x = [-1] * len(self.inputs)
        self.y = [-1] * len(self.inputs)
        for cell, value in pinned.mapping.items():
            self.x[position[cell]] = self.y[position[cell]] = value
        self.position = position
        self.first_e = E.cells[0]

        tables = nuca.tables
        rule_ids = nuca.rule_index_many(self.outputs.as_array())
        step = {c: i for i, c in enumerate(self.order)}
        # output checks bucketed by the search step that completes their inputs
        self.checks: Dict[int, List[Tuple[Tuple[int, ...], Tuple[int, ...]]]] = {}
        for h, rule in zip(self.outputs.cells, rule_ids):
            columns = tuple(position[tuple(a + b for a, b in zip(h, m))] for m in memory)
            cells = [self.inputs.cells[col] for col in columns]
            ready = max((step[c] for c in cells if c in step), default=-1)
            self.checks.setdefault(ready, []).append((columns, tables[int(rule)].table))
        self.nodes = 0

    def _outputs_agree(self, step: int) -> bool:
        q = self.nuca.q
        for columns, table in self.checks.get(step, ()):
            cx = cy = 0
            for col in columns:
                cx = cx * q + self.x[col]
                cy = cy * q + self.y[col]
            if table[cx] != table[cy]:
                return False
        return True

    def _choices(self, cell: Cell):
        q = self.nuca.q
        if cell not in self.E.members:
            return [(a, a) for a in range(q)]
        pairs = [(a, b) for b in range(q) for a in range(q) if a != b]
        if cell == self.first_e:
            pairs = [(a, b) for a, b in pairs if b < a]
        return pairs

    def solve(self) -> Optional[PreinjWitness]:
        if not self._outputs_agree(-1):
            return None
        if self._assign(0):
            return self._witness()
        return None

    def _assign(self, step: int) -> bool:
        if step == len(self.order):
            return True
        self.nodes += 1
        if self.nodes % _DEADLINE_STRIDE == 0:
            self.budget.check_deadline()
        cell = self.order[step]
        col = self.position[cell]
        for a, b in self._choices(cell):
            self.x[col], self.y[col] = a, b
            if self._outputs_agree(step) and self._assign(step + 1):
                return True
        self.x[col] = self.y[col] = -1
        return False

    def _witness(self) -> PreinjWitness:
        pos = self.position
        q1 = Pattern(self.E, tuple(self.x[pos[c]] for c in self.E.cells))
        q2 = Pattern(self.E, tuple(self.y[pos[c]] for c in self.E.cells))
        context_cells = self.inputs - self.E
        context = Pattern(context_cells, tuple(self.x[pos[c]] for c in context_cells.cells))
        return PreinjWitness(self.E, q1, q2, context)


def search_support(
    nuca: RuleAssignment,
    u: Cylinder,
    E: FiniteSet,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> Optional[PreinjWitness]:
    """First witness whose pair differs at every cell of E, if any"""
    return _SupportProblem(nuca, u, E, budget).solve()


def candidate_cells(u: Cylinder, radius: int) -> List[Cell]:
    """Cells of [-R, R]^d outside S, by (sup norm, lexicographic)"""
    box = FiniteSet.box(-radius, radius, u.d)
    free, _ = u.split(box)
    return sup_norm_order(free.cells)


def preinjectivity_witness(
    nuca: RuleAssignment,
    u: Optional[Cylinder] = None,
    support_bound: int = 2,
    search_radius: int = 2,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> WitnessSearchResult:
    """
    Exhaustive bounded search for a pre-injectivity violation of tau on U

    A FOUND witness is a genuine violation (re-verified before returning);
    NONE_UP_TO_BOUND holds only for |E| <= support_bound inside the radius.

    Supports are tried by increasing size. The candidate cells are ordered by
    sup norm first and lexicographically within one norm (see
    candidate_cells), and supports of one size follow the combination order
    of that list, so the first witness is the one closest to the origin
    rather than the lexicographically first.
    """
    if support_bound < 1:
        raise ValueError("support_bound must be at least 1")
    if search_radius < 0:
        raise ValueError("search_radius must be non-negative")
    u = u or Cylinder.full_shift(nuca.d)
    candidates = candidate_cells(u, search_radius)
    result = WitnessSearchResult(
        status=SearchStatus.NONE_UP_TO_BOUND,
        support_bound=support_bound,
        search_radius=search_radius,
    )
    completed = 0
    try:
        for size in range(1, min(support_bound, len(candidates)) + 1):
            if size > budget.max_support:
                raise BudgetExceeded(
                    f"support size {size} exceeds max_support={budget.max_support}",
                    limit=budget.max_support,
                )
            for combo in combinations(candidates, size):
                budget.check_deadline()
                E = FiniteSet(nuca.d, combo)
                witness = search_support(nuca, u, E, budget)
                result.supports_searched += 1
                if witness is None:
                    continue
                if not verify_witness(nuca, witness, u):
                    raise AssertionError(f"witness on {list(E.cells)} failed re-verification")
                logger.info(f"pre-injectivity witness on E={list(E.cells)}: q1={witness.q1.values} q2={witness.q2.values}")
                result.status = SearchStatus.FOUND
                result.witness = witness
                return result
            completed = size
            logger.debug(f"no witness with support size {size} within radius {search_radius}")
    except BudgetExceeded as e:
        result.status = SearchStatus.PARTIAL
        result.exhausted = (
            f"all supports of size <= {completed} within radius {search_radius} "
            f"({result.supports_searched} supports searched)"
        )
        result.metadata["reason"] = str(e)
        logger.warning(f"witness search stopped: {e}; searched {result.exhausted}")
        return result
    logger.info(f"no pre-injectivity witness up to support {support_bound}, radius {search_radius}")
    return result


def _configuration(witness: PreinjWitness, which: int, u: Cylinder, filler: int, window: FiniteSet) -> Configuration:
    """Completion of one side: q_i on E, context, p on S ∩ window, filler elsewhere"""
    _, pinned = u.split(window)
    merged = dict(pinned.mapping)
    merged.update(witness.context.mapping)
    merged.update((witness.q1 if which == 1 else witness.q2).mapping)
    return Configuration.constant(filler, u.d).with_overrides(Pattern.from_mapping(merged, d=u.d))


def verify_witness(
    nuca: RuleAssignment,
    witness: PreinjWitness,
    u: Optional[Cylinder] = None,
    filler: int = 0,
) -> bool:
    """
    Re-evaluate both completions on a window containing every cell whose
    output can differ, and check x != y, x and y in U, tau(x) = tau(y)
    """
    u = u or Cylinder.full_shift(nuca.d)
    M = nuca.memory
    if witness.q1 == witness.q2:
        return False
    if witness.E and u.pinned_mask(witness.E.as_array()).any():
        return False
    support = witness.E | witness.context.support
    verification = dependency_hull(support, M) | support
    window = minkowski(verification, M)
    _, pinned = u.split(witness.context.support)
    if any(witness.context.mapping[c] != v for c, v in pinned.mapping.items()):
        return False
    x = _configuration(witness, 1, u, filler, window)
    y = _configuration(witness, 2, u, filler, window)
    return evaluate_window(nuca, x, verification) == evaluate_window(nuca, y, verification)
