"""
Pattern Row Helpers

ADR Note: Blocks of patterns are numpy arrays with one row per pattern and
one column per cell (canonical cell order). Rows are ordered
lexicographically with the first column most significant, which is also the
order of the integer codes below.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, List, Optional, Tuple, TypeVar

import numpy as np

from .budget import EnumerationBudget

_CODE_LIMIT = 2 ** 62

# rows are uint8
MAX_SYMBOLS = 256

T = TypeVar("T")
U = TypeVar("U")


def all_rows(q: int, n: int, budget: Optional[EnumerationBudget] = None, what: str = "enumeration") -> np.ndarray:
    """
    Every word of length n over {0..q-1}, in lexicographic order

    Returns:
        uint8 array of shape (q**n, n)
    """
    if budget is not None:
        budget.check_rows(q ** n, what)
    if n == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    grid = np.indices((q,) * n, dtype=np.uint8)
    return grid.reshape(n, -1).T.copy()


def fits_codes(q: int, n: int) -> bool:
    """True when words of length n over q symbols fit an int64 code"""
    return q ** n < _CODE_LIMIT


def encode_rows(rows: np.ndarray, q: int) -> np.ndarray:
    """Integer code of each row (Horner, first column most significant)"""
    codes = np.zeros(rows.shape[0], dtype=np.int64)
    for column in range(rows.shape[1]):
        codes = codes * q + rows[:, column].astype(np.int64)
    return codes


def decode_codes(codes: np.ndarray, q: int, n: int) -> np.ndarray:
    """Inverse of encode_rows"""
    rows = np.zeros((codes.shape[0], n), dtype=np.uint8)
    rest = codes.astype(np.int64).copy()
    for column in range(n - 1, -1, -1):
        rows[:, column] = rest % q
        rest //= q
    return rows


def unique_rows(rows: np.ndarray, q: int) -> np.ndarray:
    """Distinct rows, sorted lexicographically"""
    if rows.shape[1] == 0:
        return rows[:1]
    if fits_codes(q, rows.shape[1]):
        codes = np.unique(encode_rows(rows, q))
        return decode_codes(codes, q, rows.shape[1])
    return np.unique(rows, axis=0)


def first_collision(rows: np.ndarray, q: int) -> Optional[Tuple[int, int]]:
    """
    Indices (i, j), i < j, of the first pair of equal rows

    ADR Note: "first" means smallest j, then smallest i, so the reported
    collision is deterministic for a given row order.
    """
    if rows.shape[0] < 2:
        return None
    if fits_codes(q, rows.shape[1]):
        return first_code_collision(encode_rows(rows, q))
    _, first_index, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
    return _collision(first_index, inverse)


def first_code_collision(codes: np.ndarray) -> Optional[Tuple[int, int]]:
    """first_collision for a vector of integer codes"""
    if codes.shape[0] < 2:
        return None
    _, first_index, inverse = np.unique(codes, return_index=True, return_inverse=True)
    return _collision(first_index, inverse)


def _collision(first_index: np.ndarray, inverse: np.ndarray) -> Optional[Tuple[int, int]]:
    inverse = np.asarray(inverse).reshape(-1)
    owners = first_index[inverse]
    duplicates = np.nonzero(owners != np.arange(inverse.shape[0]))[0]
    if duplicates.size == 0:
        return None
    j = int(duplicates[0])
    return int(owners[j]), j


def count_unique(rows: np.ndarray, q: int) -> int:
    """Number of distinct rows"""
    if rows.shape[0] == 0:
        return 0
    if rows.shape[1] == 0:
        return 1
    if fits_codes(q, rows.shape[1]):
        return int(np.unique(encode_rows(rows, q)).shape[0])
    return int(np.unique(rows, axis=0).shape[0])


def row_blocks(q: int, n: int, block_rows: int = 1 << 16) -> Iterator[np.ndarray]:
    """
    all_rows(q, n) cut into consecutive blocks of at most block_rows rows

    Concatenating the blocks gives all_rows(q, n) exactly.
    """
    total = q ** n
    if n == 0:
        yield np.zeros((1, 0), dtype=np.uint8)
        return
    if not fits_codes(q, n):
        raise ValueError(f"{q}^{n} rows cannot be indexed by int64 codes")
    for start in range(0, total, block_rows):
        stop = min(total, start + block_rows)
        yield decode_codes(np.arange(start, stop, dtype=np.int64), q, n)


def map_blocks(fn: Callable[[U], T], blocks: Iterable[U], threads: int = 1) -> List[T]:
    """
    fn applied to every block, results in block order

    ADR Note: numpy releases the GIL inside its kernels, so a thread pool
    gives real speedup on large blocks; the result order never depends on
    scheduling.
    """
    if threads <= 1:
        return [fn(block) for block in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, blocks))
