"""Exact permanents: the permutation sum, Ryser's formula and Glynn's
formula.

Ryser walks the column subsets in Gray-code order. Two kernels share that
order:

* ``python`` keeps row sums as Python integers; always exact.
* ``int64`` precomputes row sums for every subset of the low columns and
  Gray-walks the high columns, evaluating 2^low subsets per numpy call.
  Arithmetic wraps modulo 2^64, which returns the exact permanent whenever
  |per(A)| < 2^63; the kernel is only chosen when the row-abs-sum bound
  guarantees that.

Both split the high range into chunks that recompute row sums from scratch,
so the result is the same for any number of worker processes.
"""

import logging
import math
from itertools import permutations
from multiprocessing import Pool

import numpy as np

from .config import DEFAULTS
from .errors import NonIntegerResult, TooLarge
from .matrix import IntMatrix

logger = logging.getLogger(__name__)

_MOD64 = 1 << 64
_CHUNKS_PER_WORKER = 4


def _check_cap(n: int, cap: int, force: bool, name: str) -> None:
    if n > cap and not force:
        raise TooLarge(f"{name}: dimension {n} exceeds the cap {cap}")


def per_naive(matrix: IntMatrix, *, cap: int | None = None) -> int:
    """Sum over all n! permutations. Reference only, capped at ``naive_cap``."""
    cap = DEFAULTS.naive_cap if cap is None else cap
    _check_cap(matrix.n, cap, False, "per_naive")
    rows = matrix.rows
    total = 0
    for perm in permutations(range(matrix.n)):
        term = 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
            if not term:
                break
        total += term
    return total


def abs_row_bound(matrix: IntMatrix) -> int:
    """prod_i sum_j |a_ij|, an upper bound on |per| and on every partial
    row-sum product met by Ryser's formula."""
    return math.prod(sum(abs(x) for x in row) for row in matrix.rows)


def _gray_chunks(total: int, workers: int) -> list[tuple[int, int]]:
    pieces = max(1, workers * _CHUNKS_PER_WORKER) if workers > 1 else 1
    step = max(1, -(-total // pieces))
    return [(start, min(start + step, total)) for start in range(0, total, step)]


def _run(func, jobs: list, workers: int) -> list:
    if workers > 1 and len(jobs) > 1:
        with Pool(processes=workers) as pool:
            return pool.map(func, jobs)
    return [func(job) for job in jobs]


def _ryser_python_chunk(args: tuple[tuple[tuple[int, ...], ...], int, int]) -> int:
    rows, start, stop = args
    n = len(rows)
    cols = [[rows[i][j] for i in range(n)] for j in range(n)]

    gray = start ^ (start >> 1)
    sums = [sum(row[j] for j in range(n) if gray >> j & 1) for row in rows]
    sign = -1 if bin(gray).count("1") % 2 else 1
    total = 0

    for k in range(start, stop):
        if k:
            term = sign
            for s in sums:
                term *= s
                if not term:
                    break
            total += term
        if k + 1 < stop:
            bit = ((k + 1) & -(k + 1)).bit_length() - 1
            col = cols[bit]
            gray ^= 1 << bit
            if gray >> bit & 1:
                sums = [s + c for s, c in zip(sums, col)]
            else:
                sums = [s - c for s, c in zip(sums, col)]
            sign = -sign
    return total


def _low_tables(a: np.ndarray, low: int) -> tuple[np.ndarray, np.ndarray]:
    """Row sums (2^low x n) and subset signs for every subset of the first
    ``low`` columns."""
    n = a.shape[0]
    table = np.zeros((1 << low, n), dtype=np.int64)
    signs = np.ones(1 << low, dtype=np.int64)
    for j in range(low):
        half = 1 << j
        table[half : 2 * half] = table[:half] + a[:, j]
        signs[half : 2 * half] = -signs[:half]
    return table, signs


def _ryser_int64_chunk(args: tuple[tuple[tuple[int, ...], ...], int, int, int]) -> int:
    rows, low, start, stop = args
    a = np.array(rows, dtype=np.int64).reshape(len(rows), len(rows))
    table, low_signs = _low_tables(a, low)
    high_cols = a[:, low:]

    gray = start ^ (start >> 1)
    mask = np.array([gray >> j & 1 for j in range(high_cols.shape[1])], dtype=bool)
    high_sums = high_cols[:, mask].sum(axis=1, dtype=np.int64)
    sign = -1 if bin(gray).count("1") % 2 else 1
    total = 0

    for k in range(start, stop):
        products = np.prod(table + high_sums, axis=1, dtype=np.int64)
        total += sign * int(np.dot(low_signs, products))
        if k + 1 < stop:
            bit = ((k + 1) & -(k + 1)).bit_length() - 1
            gray ^= 1 << bit
            if gray >> bit & 1:
                high_sums = high_sums + high_cols[:, bit]
            else:
                high_sums = high_sums - high_cols[:, bit]
            sign = -sign
    return total % _MOD64


def per_ryser(
    matrix: IntMatrix,
    *,
    cap: int | None = None,
    force: bool = False,
    workers: int = 1,
    kernel: str = "auto",
    low_bits: int | None = None,
) -> int:
    """Exact permanent by Ryser's formula in Gray-code order.

    ``kernel="auto"`` picks the numpy int64 kernel when ``abs_row_bound`` is
    below 2^63, so every partial product and the final sum fit after the
    mod-2^64 wrap; otherwise the Python-integer kernel runs. Raises
    ``TooLarge`` above ``cap`` unless ``force`` is set. The result does not
    depend on ``workers``.
    """
    cap = DEFAULTS.ryser_cap if cap is None else cap
    low_bits = DEFAULTS.ryser_low_bits if low_bits is None else low_bits
    n = matrix.n
    _check_cap(n, cap, force, "per_ryser")
    if n == 0:
        return 1

    if kernel == "auto":
        kernel = "int64" if abs_row_bound(matrix) < 1 << 63 else "python"
    logger.debug(f"Ryser kernel {kernel} for n={n}, workers={workers}")
    sign = -1 if n % 2 else 1

    if kernel == "python":
        jobs = [(matrix.rows, a, b) for a, b in _gray_chunks(1 << n, workers)]
        return sign * sum(_run(_ryser_python_chunk, jobs, workers))
    if kernel != "int64":
        raise ValueError(f"unknown Ryser kernel {kernel!r}")

    low = min(n, low_bits)
    jobs = [(matrix.rows, low, a, b) for a, b in _gray_chunks(1 << (n - low), workers)]
    wrapped = (sign * sum(_run(_ryser_int64_chunk, jobs, workers))) % _MOD64
    return wrapped - _MOD64 if wrapped >= 1 << 63 else wrapped


def glynn_estimator(matrix: IntMatrix, signs: tuple[int, ...]) -> int:
    """One value of the +-1 estimator: prod_i (row_i . x) * prod_j x_j."""
    value = math.prod(signs)
    for row in matrix.rows:
        value *= sum(a * x for a, x in zip(row, signs))
    return value


def _glynn_chunk(args: tuple[tuple[tuple[int, ...], ...], int, int]) -> int:
    # x_0 stays +1; Gray bit j flips x_{j+1}
    rows, start, stop = args
    n = len(rows)

    gray = start ^ (start >> 1)
    x = [1] + [-1 if gray >> j & 1 else 1 for j in range(n - 1)]
    sums = [sum(a * s for a, s in zip(row, x)) for row in rows]
    sign = math.prod(x)
    total = 0

    for k in range(start, stop):
        term = sign
        for s in sums:
            term *= s
            if not term:
                break
        total += term
        if k + 1 < stop:
            bit = ((k + 1) & -(k + 1)).bit_length() - 1
            col = bit + 1
            x[col] = -x[col]
            sums = [s + 2 * x[col] * row[col] for s, row in zip(sums, rows)]
            sign = -sign
    return total


def per_glynn_exact(
    matrix: IntMatrix, *, cap: int | None = None, force: bool = False, workers: int = 1
) -> int:
    """Average of the +-1 estimator over every sign vector. Vectors x and -x
    give the same value, so x_0 = +1 is fixed and 2^(n-1) vectors suffice."""
    cap = DEFAULTS.ryser_cap if cap is None else cap
    n = matrix.n
    _check_cap(n, cap, force, "per_glynn_exact")
    if n == 0:
        return 1

    jobs = [(matrix.rows, a, b) for a, b in _gray_chunks(1 << (n - 1), workers)]
    total = sum(_run(_glynn_chunk, jobs, workers))
    value, rem = divmod(total, 1 << (n - 1))
    if rem:
        raise NonIntegerResult(f"Glynn sum {total} is not divisible by 2^{n - 1}")
    return value
