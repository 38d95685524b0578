"""
Window Matrices of Linear NUCA

ADR Note: For a linear NUCA the restriction of sigma to an output window F
is a matrix over F_q with |F| k rows and |F + M| k columns. Ranks give the
mean dimension profile, null spaces give exact pre-injectivity answers: a
linear map is pre-injective on {0}^S x K^{G minus S} exactly when no nonzero
finitely supported configuration vanishing on S lies in its kernel.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Iterator, List, Optional, Tuple

import numpy as np

from ..density.lattice_set import LatticeSet, empty_set, members_in
from ..lattice.geometry import dependency_hull, minkowski, translate
from ..lattice.types import BoxFolner, FiniteSet
from ..nuca.types import RuleAssignment, RuleTable, SearchStatus
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import MAX_SYMBOLS, all_rows, decode_codes, encode_rows
from ..utils.errors import BudgetExceeded, PreconditionFailed
from .field import nullspace
from .types import (
    KernelSearchResult,
    KernelWitness,
    LinearAssignment,
    LinearRule,
    MdimBracket,
    MdimReport,
    MdimWindow,
    WindowMatrix,
)

logger = logging.getLogger(__name__)


def window_matrix(
    nuca: LinearAssignment,
    F: FiniteSet,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> WindowMatrix:
    """Exact matrix of x|_{F+M} -> sigma(x)|_F"""
    domain = minkowski(F, nuca.memory) if F else FiniteSet.empty(nuca.d)
    budget.check_window(len(domain) * nuca.k, "window matrix columns")
    k = nuca.k
    blocks = np.zeros((len(F), k, len(domain), k), dtype=np.int64)
    if F:
        index = domain.index
        neighbors = np.asarray(
            [[index[tuple(a + b for a, b in zip(f, m))] for m in nuca.memory.cells] for f in F.cells],
            dtype=np.int64,
        )
        coefficients = np.stack([rule.array for rule in nuca.rules])[nuca.rule_index_many(F.as_array())]
        rows = np.arange(len(F))
        for j in range(len(nuca.memory)):
            blocks[rows, :, neighbors[:, j], :] += coefficients[:, j]
    matrix = blocks.reshape(len(F) * k, len(domain) * k) % nuca.q
    return WindowMatrix(matrix, F, domain, k, nuca.q)


def mdim_sequence(
    nuca: LinearAssignment,
    folner: Optional[BoxFolner] = None,
    n_max: int = 4,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> MdimReport:
    """rank(window_matrix(F_n)) / (|F_n| k) for n = 1 .. n_max"""
    folner = folner or BoxFolner(nuca.d)
    report = MdimReport(source=nuca.name or "linear NUCA", q=nuca.q, k=nuca.k)
    for n in range(1, n_max + 1):
        F = folner.window(n)
        try:
            budget.check_deadline(f"windows 1..{n - 1}")
            r = window_matrix(nuca, F, budget).rank
        except BudgetExceeded as e:
            report.truncated_at = n
            report.truncation_reason = str(e)
            logger.warning(f"mean dimension sequence truncated at n={n}: {e}")
            break
        report.windows.append(MdimWindow(n=n, size=len(F), rank=r, ratio=Fraction(r, len(F) * nuca.k)))
    logger.info(f"mean dimension of {report.source}: {[str(w.ratio) for w in report.windows]}")
    return report


def mdim_banach_bracket(
    nuca: LinearAssignment,
    radius: int,
    translate_radius: int,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> MdimBracket:
    """min / max rank ratio of [-radius, radius]^d + g over g in the translate box"""
    base = FiniteSet.box(-radius, radius, nuca.d)
    ratios = []
    for g in FiniteSet.box(-translate_radius, translate_radius, nuca.d).cells:
        budget.check_deadline()
        r = window_matrix(nuca, translate(base, g), budget).rank
        ratios.append(Fraction(r, len(base) * nuca.k))
    return MdimBracket(
        radius=radius,
        translate_radius=translate_radius,
        low=min(ratios),
        high=max(ratios),
        translates=len(ratios),
    )


def _search_boxes(d: int, support_bound: int, radius: int) -> Iterator[FiniteSet]:
    """Boxes inside [-radius, radius]^d by area, then side lengths, then lower corner"""
    side = 2 * radius + 1
    for area in range(1, support_bound + 1):
        if d == 1:
            shapes = [(area,)] if area <= side else []
        else:
            shapes = [(w, area // w) for w in range(1, area + 1) if area % w == 0 and w <= side and area // w <= side]
        for widths in shapes:
            starts = [range(-radius, radius - w + 2) for w in widths]
            for corner in product(*starts):
                yield FiniteSet.rect(corner, [c + w - 1 for c, w in zip(corner, widths)])


def _kernel_on(
    nuca: LinearAssignment, free: FiniteSet, budget: EnumerationBudget
) -> Tuple[np.ndarray, WindowMatrix, List[int]]:
    """Null space of inputs supported on `free` -> outputs that can see them"""
    outputs = dependency_hull(free, nuca.memory)
    window = window_matrix(nuca, outputs, budget)
    columns = [window.column(c, j) for c in free.cells for j in range(nuca.k)]
    return nullspace(window.matrix[:, columns], nuca.q), window, columns


def kernel_preinjectivity(
    nuca: LinearAssignment,
    S: Optional[LatticeSet] = None,
    support_bound: int = 4,
    radius: int = 4,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> KernelSearchResult:
    """
    Nonzero kernel vector supported in a box E minus S, or none up to bound

    ADR Note: A kernel vector on E minus S extends by zero to a global
    configuration with sigma(x) = 0 that vanishes on S, so a hit is a genuine
    witness; it is multiplied back through the window matrix before returning.
    Kernels found on a box are also kernels of every larger box, so boxes are
    visited by increasing area and the first hit has the smallest box.
    """
    S = S if S is not None else empty_set(nuca.d)
    result = KernelSearchResult(status=SearchStatus.NONE_UP_TO_BOUND, support_bound=support_bound, search_radius=radius)
    last_area = 0
    try:
        for E in _search_boxes(nuca.d, support_bound, radius):
            budget.check_deadline(f"every box of area <= {last_area}" if last_area else None)
            result.boxes_searched += 1
            free = E - members_in(S, E)
            if not free:
                continue
            basis, window, columns = _kernel_on(nuca, free, budget)
            if basis.shape[0]:
                vector = basis[0].reshape(len(free), nuca.k)
                check = window.matrix[:, columns] @ basis[0] % nuca.q
                if check.any():
                    raise AssertionError("kernel vector failed re-verification")
                nonzero = [i for i in range(len(free)) if vector[i].any()]
                result.witness = KernelWitness(
                    support=FiniteSet(nuca.d, tuple(free.cells[i] for i in nonzero)),
                    values=tuple(tuple(int(v) for v in vector[i]) for i in nonzero),
                    box=E,
                )
                result.status = SearchStatus.FOUND
                logger.info(f"kernel witness on box {E!r}: support {list(result.witness.support.cells)}")
                return result
            last_area = len(E)
    except BudgetExceeded as e:
        result.status = SearchStatus.PARTIAL
        result.exhausted = e.exhausted or "no box completed"
        logger.warning(f"kernel search stopped: {e}")
        return result
    logger.info(f"no kernel vector on boxes of area <= {support_bound} within radius {radius}")
    return result


def encode_vectors(vectors: np.ndarray, q: int) -> np.ndarray:
    """k-vectors over F_q to symbols in [0, q^k), first component most significant"""
    return encode_rows(vectors, q)


def decode_symbols(symbols: np.ndarray, q: int, k: int) -> np.ndarray:
    return decode_codes(np.asarray(symbols, dtype=np.int64), q, k).astype(np.int64)


def _expand_rule(rule: LinearRule, budget: EnumerationBudget) -> RuleTable:
    symbols = rule.q ** rule.k
    inputs = all_rows(symbols, len(rule.memory), budget, f"table of linear rule {rule.name or '<anonymous>'}")
    vectors = decode_symbols(inputs.reshape(-1), rule.q, rule.k).reshape(inputs.shape[0], len(rule.memory), rule.k)
    outputs = np.einsum("mij,nmj->ni", rule.array, vectors) % rule.q
    return RuleTable(rule.memory, symbols, tuple(int(v) for v in encode_vectors(outputs, rule.q)), rule.name)


def to_rule_assignment(nuca: LinearAssignment, budget: EnumerationBudget = DEFAULT_BUDGET) -> RuleAssignment:
    """
    The same NUCA as lookup tables over q^k symbols

    Raises:
        PreconditionFailed: q^k exceeds MAX_SYMBOLS
        BudgetExceeded: (q^k)^{|M|} table entries exceed the budget
    """
    symbols = nuca.q ** nuca.k
    if symbols > MAX_SYMBOLS:
        raise PreconditionFailed(f"alphabet F_{nuca.q}^{nuca.k} has {symbols} symbols, tables hold at most {MAX_SYMBOLS}")
    default = _expand_rule(nuca.default, budget)
    regions = tuple((region, _expand_rule(rule, budget)) for region, rule in nuca.regions)
    return RuleAssignment(symbols, nuca.d, nuca.memory, default, regions, nuca.name)
