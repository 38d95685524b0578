"""
Exact Linear Algebra over GF(p)

ADR Note: Gauss-Jordan elimination on numpy int64 arrays reduced mod p after
every row operation. Entries stay in [0, p), so products fit int64 for any
prime below 2^31. Inverses come from pow(a, -1, p).
"""

from typing import List, Tuple

import numpy as np


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    factor = 2
    while factor * factor <= q:
        if q % factor == 0:
            return False
        factor += 1
    return True


def rref(matrix: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form mod p and the pivot columns

    Returns:
        (R, pivots) with R of the same shape as `matrix`
    """
    R = np.asarray(matrix, dtype=np.int64) % p
    R = R.copy()
    rows, columns = R.shape
    pivots: List[int] = []
    row = 0
    for column in range(columns):
        if row == rows:
            break
        candidates = np.nonzero(R[row:, column])[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
        R[row] = (R[row] * pow(int(R[row, column]), -1, p)) % p
        others = np.nonzero(R[:, column])[0]
        others = others[others != row]
        if others.size:
            R[others] = (R[others] - np.outer(R[others, column], R[row])) % p
        pivots.append(column)
        row += 1
    return R, pivots


def rank(matrix: np.ndarray, p: int) -> int:
    if matrix.size == 0:
        return 0
    return len(rref(matrix, p)[1])


def nullspace(matrix: np.ndarray, p: int) -> np.ndarray:
    """
    Basis of {x : A x = 0} mod p, one vector per row, itself in RREF

    ADR Note: The basis is returned reduced so that its pivot columns are
    coordinates that, once pinned to zero, leave only the zero kernel vector.
    """
    A = np.asarray(matrix, dtype=np.int64)
    columns = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(columns, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [c for c in range(columns) if c not in set(pivots)]
    basis = np.zeros((len(free), columns), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(pivots):
            basis[i, c] = (-R[r, f]) % p
    if basis.shape[0] == 0:
        return basis
    return rref(basis, p)[0]


def nullspace_pivots(basis: np.ndarray, p: int) -> List[int]:
    """Pivot columns of a null-space basis (already in RREF)"""
    if basis.shape[0] == 0:
        return []
    return rref(basis, p)[1]
