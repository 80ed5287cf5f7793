"""Sign-matrix reformulation: feasibility as a null component of ``r = M y``.

``M`` is the implicit ``2**n x n`` matrix whose row ``i`` (1-based) holds the
sign vector with ``s_j = +1`` iff bit ``j-1`` of ``i-1`` is set.  Rows are
generated on demand in tiles, so ``M`` is never stored whole.

Every code path sums a row strictly left to right over ``j = 1..n`` starting
from ``0.0``.  That is the same operation sequence as the Branch-and-Prune
recurrence ``x_k = x_{k-1} + s_k y_k``, which keeps cross-path comparisons
bit-exact.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BadSign, IndexOutOfRange, SizeLimit, SizeMismatch

MAX_N = 30
TILE_ROWS = 1 << 16


@dataclass(frozen=True)
class SignMatrixSpec:
    n: int

    def __post_init__(self):
        check_size(self.n)

    @property
    def row_count(self) -> int:
        return 1 << self.n


@dataclass(frozen=True)
class ResultVector:
    """Slice ``r[lo..hi]`` (1-based, inclusive) of ``r = M y``."""

    values: np.ndarray
    lo: int
    hi: int

    def __post_init__(self):
        if len(self.values) != self.hi - self.lo + 1:
            raise SizeMismatch("values length does not match the row range")

    def __len__(self):
        return len(self.values)


def check_size(n: int, cap: int = MAX_N) -> None:
    if n < 1:
        raise SizeMismatch(f"n must be >= 1, got {n}")
    if n > cap:
        raise SizeLimit(f"n={n} exceeds the enumeration cap of {cap}")


def _check_row(i: int, n: int) -> None:
    if not 1 <= i <= (1 << n):
        raise IndexOutOfRange(f"row {i} outside 1..{1 << n}")


def matrix_element(i: int, j: int, n: int) -> int:
    """``M[i, j]``: -1 when ``(i-1) // 2**(j-1)`` is even, +1 otherwise."""
    _check_row(i, n)
    if not 1 <= j <= n:
        raise IndexOutOfRange(f"column {j} outside 1..{n}")
    return 1 if ((i - 1) >> (j - 1)) & 1 else -1


def decode_row(i: int, n: int) -> tuple[int, ...]:
    _check_row(i, n)
    b = i - 1
    return tuple(1 if (b >> j) & 1 else -1 for j in range(n))


def encode_signs(s: Sequence[int]) -> int:
    """Inverse of :func:`decode_row`."""
    b = 0
    for j, v in enumerate(s):
        if v == 1:
            b |= 1 << j
        elif v != -1:
            raise BadSign(f"entry {j} is {v!r}, expected -1 or +1")
    return b + 1


def sign_block(n: int, lo: int, hi: int) -> np.ndarray:
    """Rows ``lo..hi`` of ``M`` as an ``int8`` array of shape ``(hi-lo+1, n)``."""
    _check_row(lo, n)
    _check_row(hi, n)
    idx = np.arange(lo - 1, hi, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


def _as_chain(y) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise SizeMismatch("distance chain must be one-dimensional")
    return y


def _rows(y: np.ndarray, lo: int, hi: int) -> np.ndarray:
    # r = ((0 + s_1 y_1) + s_2 y_2) + ..., one column at a time
    idx = np.arange(lo - 1, hi, dtype=np.int64)
    r = np.zeros(len(idx))
    for j, yj in enumerate(y):
        bit = ((idx >> j) & 1).astype(bool)
        r += np.where(bit, yj, -yj)
    return r


def _check_range(n: int, lo: int, hi: int | None) -> int:
    check_size(n)
    if hi is None:
        hi = 1 << n
    _check_row(lo, n)
    _check_row(hi, n)
    if hi < lo:
        raise IndexOutOfRange(f"empty row range {lo}..{hi}")
    return hi


def iter_multiply(y, lo: int = 1, hi: int | None = None, tile_rows: int = TILE_ROWS) -> Iterator[ResultVector]:
    """Stream ``r[lo..hi]`` as consecutive tiles of at most ``tile_rows`` rows."""
    y = _as_chain(y)
    hi = _check_range(len(y), lo, hi)
    for a in range(lo, hi + 1, tile_rows):
        b = min(a + tile_rows - 1, hi)
        yield ResultVector(_rows(y, a, b), a, b)


def multiply(y, lo: int = 1, hi: int | None = None, tile_rows: int = TILE_ROWS) -> ResultVector:
    """``r[lo..hi]`` of ``r = M y`` (whole vector by default)."""
    tiles = list(iter_multiply(y, lo, hi, tile_rows))
    return ResultVector(np.concatenate([t.values for t in tiles]), tiles[0].lo, tiles[-1].hi)


def feasible_rows(y, eps: float = 0.0, *, tile_rows: int = TILE_ROWS, n_jobs: int = 1) -> list[int]:
    """Ascending 1-based rows with ``|r_i| <= eps``; empty iff infeasible at ``eps``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    y = _as_chain(y)
    hi = _check_range(len(y), 1, None)
    starts = range(1, hi + 1, tile_rows)

    def scan(a):
        b = min(a + tile_rows - 1, hi)
        hits = np.flatnonzero(np.abs(_rows(y, a, b)) <= eps)
        return (hits + a).tolist()

    if n_jobs > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            chunks = list(pool.map(scan, starts))
    else:
        chunks = [scan(a) for a in starts]
    return [i for chunk in chunks for i in chunk]


def reconstruct_solution(i: int, aug):
    """Realization encoded by row ``i``: positions from the branching recurrence."""
    from .bp import Realization, positions_from_signs

    signs = decode_row(i, aug.n)
    return Realization(signs, positions_from_signs(signs, aug.y))
