"""Kasteleyn matrices on the decorated lattice and dimer correlations.

Rows are indexed by black vertices and columns by white vertices in the
order of :meth:`DecoratedLattice.blacks` / :meth:`DecoratedLattice.whites`.
An internal edge (white and black at the same position) carries sign -1,
every other edge +1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .counting import bareiss_determinant
from .errors import CoordinateOutOfRange, SingularKasteleyn
from .lattice import DecoratedLattice, LHGraph, column_size, step_left, top_num
from .model import Partition

EXACT_INVERSE_LIMIT = 2000


@dataclass(frozen=True, eq=False)
class KasteleynMatrix:
    whites: tuple
    blacks: tuple
    entries: dict  # (black index, white index) -> +1 / -1

    @property
    def size(self) -> int:
        return len(self.blacks)

    def __post_init__(self):
        object.__setattr__(self, "_wpos", {w: k for k, w in enumerate(self.whites)})
        object.__setattr__(self, "_bpos", {b: k for k, b in enumerate(self.blacks)})

    def white_index(self, w) -> int:
        return self._wpos[w]

    def black_index(self, b) -> int:
        return self._bpos[b]

    def __call__(self, b, w) -> int:
        return self.entries.get((self.black_index(b), self.white_index(w)), 0)

    def dense(self) -> list[list[int]]:
        rows = [[0] * len(self.whites) for _ in self.blacks]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def array(self) -> np.ndarray:
        out = np.zeros((len(self.blacks), len(self.whites)))
        for (i, j), v in self.entries.items():
            out[i, j] = v
        return out


def _same_position(w, b) -> bool:
    return w[0] == "w" and b[0] == "b" and w[1:] == b[1:]


def matrix_from_edges(whites: Sequence, blacks: Sequence, edges: Sequence) -> KasteleynMatrix:
    wpos = {w: k for k, w in enumerate(whites)}
    bpos = {b: k for k, b in enumerate(blacks)}
    entries = {}
    for w, b in edges:
        entries[(bpos[b], wpos[w])] = -1 if _same_position(w, b) else 1
    return KasteleynMatrix(tuple(whites), tuple(blacks), entries)


def kasteleyn_matrix(shape: Partition, t: int) -> KasteleynMatrix:
    lattice = DecoratedLattice(shape, t)
    return matrix_from_edges(lattice.whites(), lattice.blacks(), lattice.edges())


def kasteleyn_determinant(K: KasteleynMatrix) -> int:
    """``|det K|`` by fraction-free elimination."""
    if len(K.whites) != len(K.blacks):
        raise ValueError("Kasteleyn matrix is not square")
    return abs(bareiss_determinant(K.dense()))


def face_sign_report(shape: Partition, t: int) -> list[tuple[int, int]]:
    """``(face length, number of -1 edges)`` for every bounded face."""
    lattice = DecoratedLattice(shape, t)
    edge_set = set(lattice.edges())
    report = []
    for face in lattice.faces():
        if not set(face) <= edge_set:
            raise AssertionError(f"face boundary {face} uses a missing edge")
        report.append((len(face), sum(1 for w, b in face if _same_position(w, b))))
    return report


def faces_are_kasteleyn(shape: Partition, t: int) -> bool:
    """Hexagons need two negative edges and octagons three."""
    return all((length, neg) in {(6, 2), (8, 3)} for length, neg in face_sign_report(shape, t))


# ---------------------------------------------------------------------------
# inverse and correlations


def exact_inverse(K: KasteleynMatrix) -> list[list[Fraction]]:
    """Gauss-Jordan over the rationals; returns a white-by-black matrix."""
    size = K.size
    a = [[Fraction(v) for v in row] for row in K.dense()]
    inv = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularKasteleyn("Kasteleyn matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        if p != 1:
            a[col] = [v / p for v in a[col]]
            inv[col] = [v / p for v in inv[col]]
        for r in range(size):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    # inv is the inverse of the black-by-white matrix, i.e. white-by-black
    return inv


def float_inverse(K: KasteleynMatrix) -> np.ndarray:
    arr = K.array()
    cond = np.linalg.cond(arr)
    if not np.isfinite(cond):
        raise SingularKasteleyn("Kasteleyn matrix is singular")
    if cond > 1e10:
        warnings.warn(f"Kasteleyn matrix is ill-conditioned (cond={cond:.3g})", RuntimeWarning)
    return np.linalg.inv(arr)


@dataclass
class InverseKasteleyn:
    """Cached inverse with rational entries when the matrix is small enough."""

    K: KasteleynMatrix
    exact_limit: int = EXACT_INVERSE_LIMIT

    def __post_init__(self):
        if self.K.size <= self.exact_limit:
            self._exact = exact_inverse(self.K)
            self._float = None
        else:
            self._exact = None
            self._float = float_inverse(self.K)

    @property
    def exact(self) -> bool:
        return self._exact is not None

    def __call__(self, w, b):
        i, j = self.K.white_index(w), self.K.black_index(b)
        if self._exact is not None:
            return self._exact[i][j]
        return float(self._float[i, j])


def _small_det(m: list[list]) -> object:
    size = len(m)
    if size == 1:
        return m[0][0]
    total = 0
    for c in range(size):
        minor = [row[:c] + row[c + 1 :] for row in m[1:]]
        total += (-1) ** c * m[0][c] * _small_det(minor)
    return total


def edge_probability(K: KasteleynMatrix, edges: Sequence[tuple], inverse: InverseKasteleyn | None = None):
    """Probability that all ``(white, black)`` edges are covered simultaneously.

    Returns a :class:`~fractions.Fraction` when the inverse is exact.
    """
    inverse = inverse if inverse is not None else InverseKasteleyn(K)
    if not edges:
        return Fraction(1)
    sign = 1
    for w, b in edges:
        v = K(b, w)
        if v == 0:
            raise ValueError(f"{(w, b)} is not an edge")
        sign *= v
    block = [[inverse(w, b) for _, b in edges] for w, _ in edges]
    if len(edges) <= 4:
        det = _small_det(block)
    else:
        det = float(np.linalg.det(np.array(block, dtype=float)))
    return sign * det


def all_edge_probabilities(shape: Partition, t: int) -> dict:
    K = kasteleyn_matrix(shape, t)
    inverse = InverseKasteleyn(K)
    lattice = DecoratedLattice(shape, t)
    return {e: edge_probability(K, [e], inverse) for e in lattice.edges()}


# ---------------------------------------------------------------------------
# closed-form inverse for a single long row with t = n


@dataclass(frozen=True)
class SingleRowRegion:
    """Columns ``n-1 .. n(kappa+1)-1`` of the graph with ``t = n``.

    For the shape ``(kappa*n, 0, ..., 0)`` the rows below the first are frozen
    vertical drops in columns ``0..n-2``; only the first path moves, and it
    lives in this region.  ``("W",)`` is the decoration above the top of
    column ``n-1`` and ``("B",)`` the decoration below the floor vertex of the
    last column.
    """

    n: int
    kappa: int

    @property
    def t(self) -> int:
        return self.n

    @property
    def first_col(self) -> int:
        return self.n - 1

    @property
    def last_col(self) -> int:
        return self.n * (self.kappa + 1) - 1

    def vertices(self) -> list[tuple[int, int]]:
        return [(c, m) for c in range(self.first_col, self.last_col + 1) for m in range(column_size(self.t, c))]

    def contains(self, v) -> bool:
        c, m = v
        return self.first_col <= c <= self.last_col and 0 <= m < column_size(self.t, c)

    @property
    def source(self) -> tuple[int, int]:
        return self.first_col, top_num(self.t, self.first_col)

    @property
    def sink(self) -> tuple[int, int]:
        return self.last_col, 0

    def whites(self) -> list:
        return [("w", *v) for v in self.vertices()] + [("W",)]

    def blacks(self) -> list:
        return [("b", *v) for v in self.vertices()] + [("B",)]

    def edges(self) -> list:
        g = LHGraph(self.t, self.last_col)
        out = [(("w", *v), ("b", *v)) for v in self.vertices()]
        for u, v in g.edges():
            if self.contains(u) and self.contains(v):
                out.append((("w", *u), ("b", *v)))
        out.append((("W",), ("b", *self.source)))
        out.append((("w", *self.sink), ("B",)))
        return out

    def kasteleyn(self) -> KasteleynMatrix:
        return matrix_from_edges(self.whites(), self.blacks(), self.edges())

    def counts_from(self, start) -> dict:
        """Number of down-right paths from ``start`` to every vertex of the region."""
        counts = {}
        for c in range(start[0], self.last_col + 1):
            for m in range(column_size(self.t, c) - 1, -1, -1):
                v = (c, m)
                if v == start:
                    counts[v] = 1
                    continue
                total = counts.get((c, m + 1), 0)
                left = step_left(c, m)
                if left is not None:
                    total += counts.get(left, 0)
                counts[v] = total
        return counts


@lru_cache(maxsize=64)
def _region_counts(n: int, kappa: int) -> tuple[SingleRowRegion, dict]:
    region = SingleRowRegion(n, kappa)
    return region, {v: region.counts_from(v) for v in region.vertices()}


def closed_form_inverse_single_row(n: int, kappa: int, white: tuple, black: tuple) -> Fraction:
    """Inverse Kasteleyn entry from path counts.

    ``K^-1(w, b) = P(top -> w) P(b -> floor) / P(top -> floor) - P(b -> w)``

    where ``P(u -> v)`` counts down-right paths (1 when ``u = v``), ``top`` is
    the upper end of the moving path and ``floor`` its lower end.  The
    decorations behave like copies of those two vertices: ``W`` has
    ``P(top -> W) = 1`` and ``B`` has ``P(b -> B) = P(b -> floor)``.
    """
    region, counts = _region_counts(n, kappa)

    def position(v, kind):
        if v[0] == kind.upper():
            return None
        if v[0] != kind or not region.contains(tuple(v[1:])):
            raise CoordinateOutOfRange(f"{v} is not a vertex of the region")
        return tuple(v[1:])

    w = position(white, "w")
    b = position(black, "b")
    total = counts[region.source][region.sink]

    from_top = 1 if w is None else counts[region.source].get(w, 0)
    to_floor = 1 if b is None else counts[b].get(region.sink, 0)
    if b is None:
        between = 0
    elif w is None:
        between = 0
    else:
        between = counts[b].get(w, 0)
    return Fraction(from_top * to_floor, total) - between


def single_row_identity_defects(n: int, kappa: int) -> int:
    """Number of ``(b, b')`` pairs where ``K K^-1`` differs from the identity."""
    region, _ = _region_counts(n, kappa)
    K = region.kasteleyn()
    whites, blacks = region.whites(), region.blacks()
    columns = {}
    for bp in blacks:
        columns[bp] = [closed_form_inverse_single_row(n, kappa, w, bp) for w in whites]
    rows_of = {}
    for (bi, wi), v in K.entries.items():
        rows_of.setdefault(bi, []).append((wi, v))
    defects = 0
    for bi, b in enumerate(blacks):
        for bp in blacks:
            col = columns[bp]
            value = sum(v * col[wi] for wi, v in rows_of.get(bi, []))
            if value != (1 if b == bp else 0):
                defects += 1
    return defects


def coordinate_vertex(col: int, y: Fraction | int | str) -> tuple[int, int]:
    """Convert a point ``(col, y)`` of the embedding to ``(col, num)``."""
    y = Fraction(y)
    num = y * (col + 1)
    if num.denominator != 1:
        raise CoordinateOutOfRange(f"height {y} is not on column {col}")
    return col, int(num)
