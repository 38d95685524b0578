"""
Finite-Window Counting Certificates

ADR Note: If tau is pre-injective on U = {p} x A^{Z^d minus S}, then the
family Z of configurations that are free on F minus S, equal p on S and a
filler symbol elsewhere has |tau(Z)| = |A|^{|F minus S|}. The certificate
enumerates Z and counts images on the window where two members of Z can
differ after tau (F + M, widened to F - M for an asymmetric memory). A
collision is a genuine witness and is returned as one.
"""

import logging
import math
from typing import Dict, Optional

import numpy as np

from ..density.calculator import window_count
from ..lattice.geometry import dependency_hull, minkowski
from ..lattice.types import BoxFolner, Cell, FiniteSet, Pattern
from ..nuca.engine import WindowMap, cylinder_inputs, image_codes, image_open_probe, perturbation_support
from ..nuca.types import Cylinder, PreinjWitness, RuleAssignment
from ..nuca.witness import preinjectivity_witness, verify_witness
from ..density.lattice_set import finite
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import decode_codes, encode_rows, first_code_collision, fits_codes, map_blocks
from ..utils.errors import BudgetExceeded, PreconditionFailed
from .estimator import entropy_sequence
from .sources import ImageSource
from .types import (
    BoundComparison,
    BoundRow,
    CertificateStatus,
    CertificateVerdict,
    OpenImageProbeReport,
)

logger = logging.getLogger(__name__)


def _collision_witness(
    free: FiniteSet,
    domain: FiniteSet,
    row_i: np.ndarray,
    row_j: np.ndarray,
    fixed: Dict[Cell, int],
) -> PreinjWitness:
    """Witness from two colliding free rows; the context is their common part"""
    differing = [k for k in range(len(free)) if row_i[k] != row_j[k]]
    E = FiniteSet(free.d, tuple(free.cells[k] for k in differing))
    first, second = tuple(int(row_i[k]) for k in differing), tuple(int(row_j[k]) for k in differing)
    if first < second:
        first, second = second, first
    shared = dict(fixed)
    shared.update(zip(free.cells, (int(v) for v in row_i)))
    context_cells = domain - E
    context = Pattern(context_cells, tuple(shared[c] for c in context_cells.cells))
    return PreinjWitness(E, Pattern(E, first), Pattern(E, second), context)


def window_injectivity_certificate(
    nuca: RuleAssignment,
    u: Optional[Cylinder],
    F: FiniteSet,
    filler: int = 0,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> CertificateVerdict:
    """
    PASS iff the |A|^{|F minus S|} completions have distinct images

    Raises:
        BudgetExceeded: |A|^{|F minus S|} exceeds max_patterns
    """
    u = u or Cylinder.full_shift(nuca.d)
    if not 0 <= filler < nuca.q:
        raise PreconditionFailed(f"filler {filler} is not a symbol of the alphabet")
    M = nuca.memory
    output_window = minkowski(F, M) | dependency_hull(F, M)
    if not fits_codes(nuca.q, len(output_window)):
        raise PreconditionFailed(f"output window of {len(output_window)} cells cannot be indexed")
    window = WindowMap(nuca, output_window)
    domain = window.domain
    budget.check_window(len(domain), "certificate input window")

    free, _ = u.split(F)
    rest_free, rest_pinned = u.split(domain - free)
    fixed = dict(rest_pinned.mapping)
    fixed.update({c: filler for c in rest_free.cells})
    fixed_pattern = Pattern.from_mapping(fixed, d=nuca.d) if fixed else Pattern.empty(nuca.d)

    def block_codes(inputs: np.ndarray) -> np.ndarray:
        budget.check_deadline()
        return encode_rows(window.apply(inputs), nuca.q)

    blocks = cylinder_inputs(domain, nuca.q, None, budget, f"certificate family on {len(free)} free cells", fixed_pattern)
    codes = np.concatenate(map_blocks(block_codes, blocks, budget.threads))
    expected = nuca.q ** len(free)
    image_count = int(np.unique(codes).size)
    verdict = CertificateVerdict(
        status=CertificateStatus.PASS if image_count == expected else CertificateStatus.FAIL,
        window=F,
        free_cells=len(free),
        expected=expected,
        image_count=image_count,
        metadata={"output_window": len(output_window), "filler": filler},
    )
    if verdict.passed:
        logger.info(f"window certificate PASS: {image_count} distinct images of {expected} completions")
        return verdict

    i, j = first_code_collision(codes)
    rows = decode_codes(np.asarray([i, j], dtype=np.int64), nuca.q, len(free))
    witness = _collision_witness(free, domain, rows[0], rows[1], fixed)
    if not verify_witness(nuca, witness, u, filler):
        raise AssertionError("certificate collision failed re-verification")
    verdict.witness = witness
    logger.info(
        f"window certificate FAIL: {image_count} images for {expected} completions; "
        f"collision on E={list(witness.E.cells)}"
    )
    return verdict


def entropy_bound_comparison(
    nuca: RuleAssignment,
    u: Optional[Cylinder] = None,
    folner: Optional[BoxFolner] = None,
    n_max: int = 3,
    filler: int = 0,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> BoundComparison:
    """
    Per window: entropy of the restricted image vs (1 - |S∩F_n|/|F_n|) log|A|,
    plus the window certificate verdict
    """
    u = u or Cylinder.full_shift(nuca.d)
    folner = folner or BoxFolner(nuca.d)
    log_q = math.log(nuca.q)
    comparison = BoundComparison()
    for n in range(1, n_max + 1):
        F = folner.window(n)
        pinned = window_count(u.S, F)
        row = BoundRow(n=n, size=len(F), pinned=pinned, bound=(1 - pinned / len(F)) * log_q)
        try:
            count = int(image_codes(nuca, F, u, budget).size)
        except BudgetExceeded as e:
            comparison.truncated_at = n
            logger.warning(f"bound comparison truncated at n={n}: {e}")
            break
        row.entropy = math.log(count) / len(F) if count else 0.0
        # exact comparison on integers: count >= q^{|F \ S|}
        row.meets_bound = count >= nuca.q ** (len(F) - pinned)
        try:
            row.certificate = window_injectivity_certificate(nuca, u, F, filler, budget).status
        except BudgetExceeded as e:
            logger.debug(f"certificate skipped at n={n}: {e}")
        if row.certificate == CertificateStatus.FAIL and comparison.certificate_failed_at is None:
            comparison.certificate_failed_at = n
        comparison.rows.append(row)
    return comparison


def open_image_equivalence_probe(
    nuca: RuleAssignment,
    radius: int = 2,
    support_bound: int = 2,
    n_max: int = 2,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> OpenImageProbeReport:
    """
    For asymptotically constant NUCA: witness search on the cylinder pinned
    to 0 on D + M (D = perturbation support), window entropies of the image,
    and the open-image probe with E = D + M inside a box of the given radius
    """
    D = perturbation_support(nuca)
    if D is None:
        raise PreconditionFailed("open-image probe needs an asymptotically constant NUCA (finite regions only)")
    pinned = minkowski(D, nuca.memory) if D else FiniteSet.empty(nuca.d)
    cylinder = Cylinder(finite(pinned)) if pinned else Cylinder.full_shift(nuca.d)
    search = preinjectivity_witness(nuca, cylinder, support_bound, radius, budget)
    entropy = entropy_sequence(ImageSource(nuca), BoxFolner(nuca.d), n_max, budget)

    E = pinned if pinned else FiniteSet(nuca.d, ((0,) * nuca.d,))
    lows, highs = E.hull()
    reach = max(max(abs(v) for v in lows), max(abs(v) for v in highs), radius)
    W = FiniteSet.box(-reach, reach, nuca.d)
    try:
        accepted = image_open_probe(nuca, E, W, budget=budget)
    except BudgetExceeded as e:
        logger.warning(f"open probe skipped: {e}")
        accepted = None

    return OpenImageProbeReport(
        perturbation_support=[list(c) for c in D.cells],
        pinned_cells=[list(c) for c in pinned.cells],
        witness_status=search.status.value,
        witness=search.witness.as_payload() if search.witness else None,
        entropy=entropy.windows,
        open_pattern=list(accepted.values) if accepted is not None else None,
        open_support=[list(c) for c in E.cells],
        open_window=[list(c) for c in W.hull()],
    )
