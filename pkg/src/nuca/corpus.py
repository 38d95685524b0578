"""
Example Corpus

ADR Note: The worked examples shipped with the toolkit, built in code. The
same rules live as text under corpus/*.nuca; the tests check that both
agree.
"""

from typing import Dict, Callable, Optional

import numpy as np

from ..density.lattice_set import CosetAtom, FiniteAtom, HalfSpaceAtom, LatticeSet, PowerAtom, coset
from ..lattice.types import FiniteSet
from .types import RuleAssignment, RuleTable

LINE_MEMORY = FiniteSet.interval(-1, 1)
COLUMN_MEMORY = FiniteSet(2, ((0, -1), (0, 0), (0, 1)))

# n <= m - 1 in cells (m, n)
BELOW_DIAGONAL = HalfSpaceAtom((1, -1), 1)
DIAGONAL = CosetAtom(((1, 1),), (0, 0))


def identity(q: int = 2, d: int = 1) -> RuleAssignment:
    memory = FiniteSet(d, ((0,) * d,))
    return RuleAssignment.uniform(RuleTable.projection(memory, q, (0,) * d, "identity"), d, "identity")


def shift(q: int = 2) -> RuleAssignment:
    """The left shift x -> x(n + 1), a cellular automaton"""
    return RuleAssignment.uniform(RuleTable.projection(LINE_MEMORY, q, 1, "shift"), 1, "shift")


def shift_toward_origin() -> RuleAssignment:
    """
    Injective, non-surjective NUCA on {0,1}^Z

    x(n+1) for n <= -1, x(0) at 0, x(n-1) for n >= 1; every image has
    y(-1) = y(0) = y(1).
    """
    M = LINE_MEMORY
    right = RuleTable.projection(M, 2, 1, "right")
    keep = RuleTable.projection(M, 2, 0, "keep")
    left = RuleTable.projection(M, 2, -1, "left")
    regions = (
        (HalfSpaceAtom((-1,), 1), right),
        (FiniteAtom(FiniteSet.of([0])), keep),
    )
    return RuleAssignment(2, 1, M, left, regions, "shift-toward-origin")


def diagonal_shift_toward() -> RuleAssignment:
    """Z^2 analogue: every column shifts toward the diagonal cell (m, m)"""
    M = COLUMN_MEMORY
    up = RuleTable.projection(M, 2, (0, 1), "up")
    keep = RuleTable.projection(M, 2, (0, 0), "keep")
    down = RuleTable.projection(M, 2, (0, -1), "down")
    return RuleAssignment(2, 2, M, down, ((BELOW_DIAGONAL, up), (DIAGONAL, keep)), "diagonal-shift-toward")


def diagonal_xor() -> RuleAssignment:
    """
    Surjective, not pre-injective NUCA on {0,1}^{Z^2}

    Off the diagonal every column shifts away from it; the diagonal cell is
    the XOR of its column neighbors and itself.
    """
    M = COLUMN_MEMORY
    down = RuleTable.projection(M, 2, (0, -1), "down")
    xor = RuleTable.linear(M, 2, (1, 1, 1), "xor")
    up = RuleTable.projection(M, 2, (0, 1), "up")
    return RuleAssignment(2, 2, M, up, ((BELOW_DIAGONAL, down), (DIAGONAL, xor)), "diagonal-xor")


def alphabet_collapse() -> RuleAssignment:
    """Cellular automaton on {0,1,2}^Z sending 2 to 0"""
    memory = FiniteSet.of([0])
    return RuleAssignment.uniform(RuleTable(memory, 3, (0, 1, 0), "collapse"), 1, "alphabet-collapse")


def squares_zeroing() -> RuleAssignment:
    """Identity except at perfect squares, where the output is 0"""
    memory = FiniteSet.of([0])
    zero = RuleTable.constant(memory, 2, 0, "zero")
    keep = RuleTable.projection(memory, 2, 0, "keep")
    return RuleAssignment(2, 1, memory, keep, ((PowerAtom(2), zero),), "squares-zeroing")


def xor_pair() -> RuleAssignment:
    """x(n) + x(n+1) mod 2"""
    memory = FiniteSet.of([0, 1])
    return RuleAssignment.uniform(RuleTable.linear(memory, 2, (1, 1), "xor"), 1, "xor-pair")


def zero_on_coset(modulus: int = 3) -> RuleAssignment:
    """Identity except on modulus*Z, where the output is 0"""
    memory = FiniteSet.of([0])
    zero = RuleTable.constant(memory, 2, 0, "zero")
    keep = RuleTable.projection(memory, 2, 0, "keep")
    return RuleAssignment(2, 1, memory, keep, ((coset(modulus, 0), zero),), f"zero-on-{modulus}Z")


EXAMPLES: Dict[str, Callable[[], RuleAssignment]] = {
    "identity": identity,
    "shift": shift,
    "shift-toward-origin": shift_toward_origin,
    "diagonal-shift-toward": diagonal_shift_toward,
    "diagonal-xor": diagonal_xor,
    "alphabet-collapse": alphabet_collapse,
    "squares-zeroing": squares_zeroing,
    "xor-pair": xor_pair,
    "zero-on-3Z": zero_on_coset,
}


def random_nuca(
    rng: np.random.Generator,
    q: int,
    memory: FiniteSet,
    max_regions: int = 2,
    max_modulus: int = 4,
) -> RuleAssignment:
    """
    Random 1-d NUCA with coset and half-line regions

    Tables are uniform random; regions are cosets aZ+b or half-lines.
    """
    def random_table(name: str) -> RuleTable:
        values = rng.integers(0, q, size=q ** len(memory))
        return RuleTable(memory, q, tuple(int(v) for v in values), name)

    regions = []
    for i in range(int(rng.integers(0, max_regions + 1))):
        region: LatticeSet
        if rng.integers(0, 2) == 0:
            a = int(rng.integers(2, max_modulus + 1))
            region = coset(a, int(rng.integers(0, a)))
        else:
            sign = 1 if rng.integers(0, 2) == 0 else -1
            region = HalfSpaceAtom((sign,), int(rng.integers(-2, 3)))
        regions.append((region, random_table(f"r{i}")))
    return RuleAssignment(q, 1, memory, random_table("default"), tuple(regions), "random")


def load_example(name: str) -> Optional[RuleAssignment]:
    factory = EXAMPLES.get(name)
    return factory() if factory else None
