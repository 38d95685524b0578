"""
Integer Subgroups of Z^d

ADR Note: Subgroups are kept as a column echelon basis (Hermite-style):
the j-th basis vector has its first nonzero entry in a strictly later row
than the (j-1)-th, and that entry is positive. This gives exact membership,
exact index and a canonical fundamental domain without any floating point.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np


def echelon_basis(columns: Sequence[Sequence[int]], d: int) -> List[Tuple[int, ...]]:
    """
    Echelon basis of the subgroup of Z^d generated by `columns`

    Only unimodular column operations are used, so the span is unchanged.
    """
    pending = [list(c) for c in columns if any(c)]
    for column in pending:
        if len(column) != d:
            raise ValueError(f"generator {tuple(column)} is not in Z^{d}")
    basis: List[Tuple[int, ...]] = []
    for row in range(d):
        pivot: Optional[List[int]] = None
        rest: List[List[int]] = []
        for column in pending:
            if column[row] == 0:
                rest.append(column)
                continue
            if pivot is None:
                pivot = column
                continue
            a, b = pivot, column
            while b[row] != 0:
                t = a[row] // b[row]
                a = [ai - t * bi for ai, bi in zip(a, b)]
                a, b = b, a
            pivot = a
            if any(b):
                rest.append(b)
        if pivot is not None:
            if pivot[row] < 0:
                pivot = [-v for v in pivot]
            basis.append(tuple(pivot))
        pending = rest
    return basis


def pivot_row(vector: Sequence[int]) -> int:
    for index, value in enumerate(vector):
        if value != 0:
            return index
    raise ValueError("zero vector has no pivot")


def subgroup_index(basis: Sequence[Sequence[int]], d: int) -> Optional[int]:
    """[Z^d : H], or None when H has infinite index"""
    if len(basis) < d:
        return None
    index = 1
    for vector in basis:
        index *= vector[pivot_row(vector)]
    return index


def contains(basis: Sequence[Sequence[int]], vector: Sequence[int]) -> bool:
    """Exact membership of `vector` in the span of an echelon basis"""
    residual = list(vector)
    for b in basis:
        p = pivot_row(b)
        if residual[p] % b[p] != 0:
            return False
        t = residual[p] // b[p]
        residual = [ri - t * bi for ri, bi in zip(residual, b)]
    return not any(residual)


def contains_many(basis: Sequence[Sequence[int]], points: np.ndarray) -> np.ndarray:
    """Vectorized `contains` over the rows of an (N, d) integer array"""
    residual = points.astype(np.int64).copy()
    ok = np.ones(points.shape[0], dtype=bool)
    for b in basis:
        p = pivot_row(b)
        ok &= (residual[:, p] % b[p]) == 0
        t = residual[:, p] // b[p]
        residual -= np.outer(t, np.asarray(b, dtype=np.int64))
    return ok & ~residual.any(axis=1)


def reduce(basis: Sequence[Sequence[int]], vector: Sequence[int]) -> Tuple[int, ...]:
    """
    Canonical representative of vector + H for a full-rank echelon basis

    The representative lies in the box prod_j [0, pivot_j).
    """
    residual = list(vector)
    for b in basis:
        p = pivot_row(b)
        t = residual[p] // b[p]
        residual = [ri - t * bi for ri, bi in zip(residual, b)]
    return tuple(residual)


def reduce_many(basis: Sequence[Sequence[int]], points: np.ndarray) -> np.ndarray:
    residual = points.astype(np.int64).copy()
    for b in basis:
        p = pivot_row(b)
        t = np.floor_divide(residual[:, p], b[p])
        residual -= np.outer(t, np.asarray(b, dtype=np.int64))
    return residual
