"""
Linear Example Corpus

ADR Note: Linear counterparts of the worked examples, mirrored by
corpus/*.lnuca.
"""

from typing import Callable, Dict, Optional

import numpy as np

from ..density.lattice_set import FiniteAtom, HalfSpaceAtom, LatticeSet, coset
from ..lattice.types import FiniteSet
from .types import FieldSpec, LinearAssignment, LinearRule


def xor_sum() -> LinearAssignment:
    """x(n) + x(n+1) over F_2: surjective, kernel = the two constants"""
    memory = FiniteSet.of([0, 1])
    return LinearAssignment.uniform(LinearRule.scalar(memory, 2, (1, 1), "sum"), 1, "xor-sum")


def identity_except_coset(modulus: int = 3) -> LinearAssignment:
    """Identity over F_2 except the zero map on modulus*Z"""
    memory = FiniteSet.of([0])
    keep = LinearRule.identity(memory, 2, name="keep")
    zero = LinearRule.zero(memory, 2, name="zero")
    return LinearAssignment(FieldSpec(2), 1, 1, memory, keep, ((coset(modulus, 0), zero),), f"identity-except-{modulus}Z")


def zero_everywhere(q: int = 2) -> LinearAssignment:
    memory = FiniteSet.of([0])
    return LinearAssignment.uniform(LinearRule.zero(memory, q, name="zero"), 1, "zero")


def shift_toward_origin() -> LinearAssignment:
    """The shift-toward-origin NUCA read as a linear map over F_2"""
    memory = FiniteSet.interval(-1, 1)
    right = LinearRule.identity(memory, 2, offset=(1,), name="right")
    keep = LinearRule.identity(memory, 2, name="keep")
    left = LinearRule.identity(memory, 2, offset=(-1,), name="left")
    regions = (
        (HalfSpaceAtom((-1,), 1), right),
        (FiniteAtom(FiniteSet.of([0])), keep),
    )
    return LinearAssignment(FieldSpec(2), 1, 1, memory, left, regions, "shift-toward-origin")


def swap_components() -> LinearAssignment:
    """F_2^2 alphabet: (a, b) at g becomes (b(g), a(g+1))"""
    memory = FiniteSet.of([0, 1])
    rule = LinearRule.from_offsets(memory, 2, 2, {(0,): [[0, 1], [0, 0]], (1,): [[0, 0], [1, 0]]}, "swap")
    return LinearAssignment.uniform(rule, 1, "swap-components")


LINEAR_EXAMPLES: Dict[str, Callable[[], LinearAssignment]] = {
    "xor-sum": xor_sum,
    "identity-except-3Z": identity_except_coset,
    "zero": zero_everywhere,
    "shift-toward-origin": shift_toward_origin,
    "swap-components": swap_components,
}


def random_linear(
    rng: np.random.Generator,
    q: int,
    k: int,
    memory: FiniteSet,
    max_regions: int = 2,
    max_modulus: int = 4,
) -> LinearAssignment:
    """Random 1-d linear NUCA with coset and half-line regions"""
    def random_rule(name: str) -> LinearRule:
        return LinearRule.from_array(memory, q, rng.integers(0, q, size=(len(memory), k, k)), name)

    regions = []
    for i in range(int(rng.integers(0, max_regions + 1))):
        region: LatticeSet
        if rng.integers(0, 2) == 0:
            a = int(rng.integers(2, max_modulus + 1))
            region = coset(a, int(rng.integers(0, a)))
        else:
            region = HalfSpaceAtom((1 if rng.integers(0, 2) == 0 else -1,), int(rng.integers(-2, 3)))
        regions.append((region, random_rule(f"r{i}")))
    return LinearAssignment(FieldSpec(q), k, 1, memory, random_rule("default"), tuple(regions), "random")


def load_linear_example(name: str) -> Optional[LinearAssignment]:
    factory = LINEAR_EXAMPLES.get(name)
    return factory() if factory else None
