"""
Periodic Injectivity Certificate

ADR Note: For a cellular automaton tau preserving X and a finite S with
pinned values p, Q_n is the set of H_n-periodic points of X equal to p on S.
The certificate evaluates tau on every member of Q_n (a periodic point maps
to a periodic point, so one fundamental domain of outputs identifies the
image), reports injectivity with a colliding pair when it fails, and checks
the counting chain

    |Gamma_{F_n Delta^2}| >= |tau(Q_n)| = |Q_n| >= |X_{F_n}| / |A|^{|S Delta|}

on the computed integers. Only this finite-n chain is certified.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..density.lattice_set import finite_cells
from ..lattice.geometry import minkowski
from ..lattice.types import FiniteSet, PeriodLattice, norm
from ..nuca.engine import WindowMap
from ..nuca.types import Cylinder, RuleAssignment, RuleTable
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import count_unique, encode_rows, first_code_collision
from ..utils.errors import PreconditionFailed
from .automaton import TransferAutomaton
from .language import language_count, language_rows
from .periodic import approximation_constants, periodic_points
from .types import SFT, PeriodicCertificateReport

logger = logging.getLogger(__name__)


def memory_radius(memory: FiniteSet) -> int:
    return max(norm(m) for m in memory.cells)


def _uniform_table(ca: RuleAssignment) -> RuleTable:
    if not all(table.same_map(ca.default) for table in ca.tables):
        raise PreconditionFailed(f"{ca.name or 'the rule'} is not a cellular automaton (rules differ by region)")
    return ca.default


def image_language_count(
    ca: RuleAssignment,
    sft: SFT,
    F: FiniteSet,
    padding: int = 1,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> Tuple[int, bool]:
    """
    |tau(X)|_F| and whether the count is exact

    Intervals of Z use the subset construction on the labeled automaton;
    other windows push X_{F+M} through the window map, which is exact in
    dimension 1 and an upper bound from the padded language in dimension 2.
    """
    table = _uniform_table(ca)
    if sft.d == 1 and F.is_box():
        described = sft.with_radius(max(sft.r, memory_radius(ca.memory)), budget)
        return TransferAutomaton(described).image_word_count(table, len(F)), True
    window = WindowMap(ca, F)
    rows, exact = language_rows(sft, window.domain, padding, budget)
    return count_unique(window.apply(rows), sft.q), exact


def preserves_sft(
    ca: RuleAssignment,
    sft: SFT,
    padding: int = 1,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> Optional[List[int]]:
    """
    None when tau maps every legal pattern on Delta + M to an allowed
    Delta-window, else the first offending input row

    Shift-commutation makes the check at the origin sufficient. In dimension
    2 the inputs come from the padded language, which contains the true one,
    so a None answer is still sound.
    """
    window = WindowMap(ca, sft.window)
    rows, _ = language_rows(sft, window.domain, padding, budget)
    if rows.shape[0] == 0:
        return None
    ok = sft.is_allowed_many(window.apply(rows))
    if ok.all():
        return None
    return [int(v) for v in rows[int(np.argmin(ok))]]


def periodic_injectivity_certificate(
    ca: RuleAssignment,
    sft: SFT,
    u: Cylinder,
    n: int,
    n0: int,
    r: int,
    padding: int = 1,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> PeriodicCertificateReport:
    """
    Injectivity of tau on Q_n and the counting chain at scale n

    Raises:
        PreconditionFailed: tau is not uniform, S is not finite, the memory
            does not fit in Delta, or tau does not preserve X
    """
    if ca.d != sft.d or ca.q != sft.q:
        raise PreconditionFailed("the automaton and the SFT differ in dimension or alphabet")
    table = _uniform_table(ca)
    S = finite_cells(u.S)
    if S is None:
        raise PreconditionFailed("the pinned set S must be finite")
    k = approximation_constants(sft, n0, r, n)
    if memory_radius(ca.memory) > r:
        raise PreconditionFailed(f"memory of radius {memory_radius(ca.memory)} does not fit in Delta = [-{r},{r}]^d")
    offending = preserves_sft(ca, sft, padding, budget)
    if offending is not None:
        raise PreconditionFailed(f"{ca.name or 'the automaton'} does not preserve {sft.name or 'the SFT'}: input {offending}")

    notes: List[str] = []
    exact = sft.d == 1
    period = 2 * k + 4 * r
    delta = FiniteSet.box(-r, r, sft.d)
    F = FiniteSet.box(-k, k, sft.d)
    lattice = PeriodLattice.scalar(period, sft.d)
    logger.info(f"periodic certificate for {ca.name or 'CA'} on {sft.name or 'SFT'}: k={k} period={period}")

    points = periodic_points(sft, lattice, budget)
    if S:
        pinned = u.pinned_values(S.as_array())
        matches = (points.rows[:, points.columns(S)] == pinned).all(axis=1)
        Q = points.rows[matches]
    else:
        Q = points.rows

    domain = lattice.domain
    window = WindowMap(ca, domain)
    inputs = Q[:, points.columns(window.domain)]
    outputs = window.apply(inputs) if Q.shape[0] else np.zeros((0, len(domain)), dtype=np.uint8)
    image_count = count_unique(outputs, sft.q) if Q.shape[0] else 0
    witness: Optional[Dict[str, Any]] = None
    if image_count < Q.shape[0]:
        i, j = first_code_collision(encode_rows(outputs, sft.q))
        witness = {
            "period": period,
            "first": [int(v) for v in Q[i]],
            "second": [int(v) for v in Q[j]],
            "image": [int(v) for v in outputs[i]],
        }

    described = sft.with_radius(r, budget)
    gamma_window = minkowski(F, minkowski(delta, delta))
    if exact:
        gamma = TransferAutomaton(described).image_word_count(table, len(gamma_window))
    else:
        gamma, _ = image_language_count(ca, sft, gamma_window, padding, budget)
        notes.append(f"image and language counts in dimension 2 come from the language padded by {padding}")
    language = language_count(sft, F, budget, padding)
    pinned_cells = len(minkowski(S, delta)) if S else 0
    lower_bound = Fraction(language, sft.q ** pinned_cells)
    q_count = int(Q.shape[0])
    chain_holds = gamma >= image_count and image_count == q_count and q_count >= lower_bound
    injective = witness is None
    if injective and not chain_holds:
        notes.append("tau is injective on Q_n but a counting inequality fails at this scale")

    report = PeriodicCertificateReport(
        n=n, n0=n0, r=r, k=k, period=period,
        image_window_count=gamma,
        periodic_count=q_count,
        periodic_image_count=image_count,
        language_count=language,
        pinned_cells=pinned_cells,
        lower_bound=lower_bound,
        passed=injective,
        chain_holds=chain_holds,
        exact=exact,
        witness=witness,
        notes=notes,
    )
    logger.info(
        f"periodic certificate {'PASS' if injective else 'FAIL'}: |Gamma|={gamma} |tau(Q)|={image_count} "
        f"|Q|={q_count} |X_F|={language} over {sft.q}^{pinned_cells}"
    )
    return report
