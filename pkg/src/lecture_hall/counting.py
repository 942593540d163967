"""Exact counts of bounded lecture hall tableaux.

Three independent routes are provided so that each can police the others:

* the product formula (:func:`count_blht`),
* a determinant of single-path counts (:func:`count_via_lgv`),
* brute-force enumeration (:func:`enumerate_blht`).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

from .errors import NonIntegerResult, SearchSpaceTooLarge
from .model import LectureHallTableau, Partition

DEFAULT_ENUMERATION_CAP = 10**7


def count_blht(shape: Partition, t: int) -> int:
    """Product formula ``t^|lambda| * prod_{i<j} (a_i - a_j) / (j - i)``.

    Here ``a_i = lambda_i + n - i``; the product is accumulated as an exact
    rational and must come out integral.
    """
    if t < 1:
        raise ValueError("t must be positive")
    n = shape.n
    ends = [shape.endpoint(i) for i in range(1, n + 1)]
    ratio = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            ratio *= Fraction(ends[i] - ends[j], j - i)
    total = ratio * t ** shape.size
    if total.denominator != 1:
        raise NonIntegerResult(f"product formula gave {total} for {shape}, t={t}")
    return int(total)


def path_count_between(a: int, b: int, c: int, d: int) -> int:
    """Closed-form count ``(b-d)^(c-a) * C(c, c-a)`` of south-east paths.

    The start is the vertex just below the integer point ``(a, b)`` and the
    target is the vertex at height ``d`` in column ``c``.  By convention the
    count is 0 when ``c < a`` or ``d > b``, and 1 when both points coincide.
    """
    if c < a or d > b:
        return 0
    return (b - d) ** (c - a) * comb(c, c - a)


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination over Python integers."""
    m = [list(map(int, row)) for row in matrix]
    size = len(m)
    if size == 0:
        return 1
    if any(len(row) != size for row in m):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, size):
            row_i = m[i]
            factor = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[-1][-1]


def lgv_matrix(shape: Partition, t: int) -> list[list[int]]:
    """Entry ``(i, j)`` counts paths from the i-th start to the j-th end."""
    n = shape.n
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            top = shape.part(j) + n - j
            k = n - i
            exponent = shape.part(j) - j + i
            row.append(comb(top, k) * t**exponent if 0 <= k <= top and exponent >= 0 else 0)
        rows.append(row)
    return rows


def count_via_lgv(shape: Partition, t: int) -> int:
    return bareiss_determinant(lgv_matrix(shape, t))


def _cell_upper(rows: list[list[int]], n: int, t: int, r: int, c: int) -> int:
    """Largest value allowed by the bound and the already-filled left/up cells."""
    d = n - r + c  # 0-indexed r, c
    hi = t * d - 1
    if c > 0:
        hi = min(hi, rows[r][c - 1] * d // (d - 1))
    if r > 0:
        # strict: rows[r-1][c] * d > v * (d + 1)
        hi = min(hi, (rows[r - 1][c] * d - 1) // (d + 1))
    return hi


def enumerate_blht(
    shape: Partition, t: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[LectureHallTableau]:
    """Yield every valid tableau in lexicographic order of row-major entries.

    The exact count from :func:`count_blht` serves as the size estimate for
    the ``cap`` guard.
    """
    estimate = count_blht(shape, t)
    if estimate > cap:
        raise SearchSpaceTooLarge(f"{estimate} tableaux exceed the cap {cap}")
    n = shape.n
    cells = [(r, c) for r in range(n) for c in range(shape.parts[r])]
    rows = [[0] * length for length in shape.parts]

    def place(k: int):
        if k == len(cells):
            yield LectureHallTableau(shape, t, tuple(tuple(r) for r in rows))
            return
        r, c = cells[k]
        for v in range(_cell_upper(rows, n, t, r, c) + 1):
            rows[r][c] = v
            yield from place(k + 1)

    yield from place(0)


def single_path_count(n: int, k: int, t: int) -> int:
    """``C(n+k-1, k) t^k`` paths for the one-row shape ``(k)`` started in column n-1."""
    return comb(n + k - 1, k) * t**k


def single_path_decomposition(n: int, k: int, t: int, s: int) -> tuple[int, int]:
    """Both sides of the split of single paths at height ``s``."""
    if not 0 < s < t:
        raise ValueError("need 0 < s < t")
    left = single_path_count(n, k, t)
    right = sum(
        single_path_count(n, l, t - s) * single_path_count(n + l, k - l, s) for l in range(k + 1)
    )
    return left, right


def verify_single_path_decomposition(n: int, k: int, t: int, s: int) -> bool:
    left, right = single_path_decomposition(n, k, t, s)
    return left == right
