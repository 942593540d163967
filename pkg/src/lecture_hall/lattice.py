"""The lecture hall graph, its dual, the dimer lattice and the bijections.

A vertex is a pair ``(col, num)``.  It sits at height ``num / (col + 1)``, so
the height is kept as an exact integer pair and never turned into a float
here.  Column ``col`` holds ``t * (col + 1)`` vertices, ``num = 0`` at the
floor and ``num = t*(col+1) - 1`` at the top.

Edges of the (primal) graph:

* horizontal: ``num = k*(col+1) + r`` goes to ``k*(col+2) + r`` in the next
  column, which keeps the integer part ``k`` and the offset ``r``;
* vertical: ``num`` goes down to ``num - 1``.

The dual graph has the same vertices, horizontal steps that land one notch
higher (``k*(col+2) + r + 1``) and upward vertical steps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import MalformedPathSystem
from .model import LectureHallTableau, Partition, conjugate

Vertex = tuple[int, int]


def column_size(t: int, col: int) -> int:
    return t * (col + 1)


def top_num(t: int, col: int) -> int:
    return t * (col + 1) - 1


def step_right(col: int, num: int) -> Vertex:
    k, r = divmod(num, col + 1)
    return col + 1, k * (col + 2) + r


def step_left(col: int, num: int) -> Vertex | None:
    """Inverse of :func:`step_right` for a vertex in column ``col`` (``None`` if unreached)."""
    if col == 0:
        return None
    k, r = divmod(num, col + 1)
    if r > col - 1:
        return None
    return col - 1, k * col + r


def dual_step_right(col: int, num: int) -> Vertex:
    c, m = step_right(col, num)
    return c, m + 1


def dual_step_left(col: int, num: int) -> Vertex | None:
    if num == 0:
        return None
    return step_left(col, num - 1)


@dataclass(frozen=True)
class LHGraph:
    """The graph truncated to columns ``0..width``."""

    t: int
    width: int

    def vertices(self) -> list[Vertex]:
        return [(c, m) for c in range(self.width + 1) for m in range(column_size(self.t, c))]

    def horizontal_edges(self) -> list[tuple[Vertex, Vertex]]:
        return [((c, m), step_right(c, m)) for c in range(self.width) for m in range(column_size(self.t, c))]

    def vertical_edges(self) -> list[tuple[Vertex, Vertex]]:
        return [((c, m), (c, m - 1)) for c in range(self.width + 1) for m in range(1, column_size(self.t, c))]

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        return self.horizontal_edges() + self.vertical_edges()

    def contains(self, v: Vertex) -> bool:
        c, m = v
        return 0 <= c <= self.width and 0 <= m < column_size(self.t, c)

    def predecessors(self, v: Vertex) -> list[Vertex]:
        c, m = v
        out = []
        left = step_left(c, m)
        if left is not None and self.contains(left):
            out.append(left)
        if m + 1 < column_size(self.t, c):
            out.append((c, m + 1))
        return out


def build_lh_graph(t: int, width: int) -> LHGraph:
    if t < 1 or width < 0:
        raise ValueError("need t >= 1 and width >= 0")
    return LHGraph(t, width)


def graph_width(shape: Partition) -> int:
    return shape.largest + shape.n - 1


# ---------------------------------------------------------------------------
# primal paths


@dataclass(frozen=True)
class PathSystem:
    """``n`` non-intersecting down-right paths; path ``i`` is ``paths[i-1]``."""

    shape: Partition
    t: int
    paths: tuple[tuple[Vertex, ...], ...]

    @property
    def n(self) -> int:
        return self.shape.n

    def start(self, i: int) -> Vertex:
        col = self.n - i
        return col, top_num(self.t, col)

    def end(self, i: int) -> Vertex:
        return self.shape.endpoint(i), 0

    def horizontal_steps(self, i: int) -> list[tuple[Vertex, Vertex]]:
        p = self.paths[i - 1]
        return [(a, b) for a, b in zip(p, p[1:]) if b[0] == a[0] + 1]

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        return [(a, b) for p in self.paths for a, b in zip(p, p[1:])]

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "lambda": list(self.shape.parts),
            "paths": [[list(v) for v in p] for p in self.paths],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "PathSystem":
        return cls(
            Partition(tuple(doc["lambda"])),
            int(doc["t"]),
            tuple(tuple((int(c), int(m)) for c, m in p) for p in doc["paths"]),
        )


def _walk_down(path: list[Vertex], target: int) -> None:
    c, m = path[-1]
    if target > m:
        raise MalformedPathSystem(f"cannot descend from {(c, m)} to num {target}")
    path.extend((c, x) for x in range(m - 1, target - 1, -1))


def tableau_to_paths(tableau: LectureHallTableau) -> PathSystem:
    """The j-th horizontal step of path i leaves its column at height ``T(i, j)``."""
    shape, t, n = tableau.shape, tableau.t, tableau.n
    paths = []
    for i in range(1, n + 1):
        col = n - i
        path = [(col, top_num(t, col))]
        for j in range(1, shape.part(i) + 1):
            _walk_down(path, tableau[i, j])
            path.append(step_right(*path[-1]))
        _walk_down(path, 0)
        paths.append(tuple(path))
    return PathSystem(shape, t, tuple(paths))


def validate_path_system(ps: PathSystem) -> None:
    t, n = ps.t, ps.n
    if len(ps.paths) != n:
        raise MalformedPathSystem(f"expected {n} paths, got {len(ps.paths)}")
    seen: set[Vertex] = set()
    for i, path in enumerate(ps.paths, start=1):
        if not path or path[0] != ps.start(i) or path[-1] != ps.end(i):
            raise MalformedPathSystem(f"path {i} has wrong endpoints")
        for a, b in zip(path, path[1:]):
            if not (b == step_right(*a) or (b[0] == a[0] and b[1] == a[1] - 1)):
                raise MalformedPathSystem(f"path {i}: {a} -> {b} is not an edge")
        for v in path:
            if not 0 <= v[1] < column_size(t, v[0]):
                raise MalformedPathSystem(f"path {i}: vertex {v} out of range")
            if v in seen:
                raise MalformedPathSystem(f"paths meet at {v}")
            seen.add(v)


def paths_to_tableau(ps: PathSystem) -> LectureHallTableau:
    validate_path_system(ps)
    rows = []
    for i in range(1, ps.n + 1):
        steps = ps.horizontal_steps(i)
        if len(steps) != ps.shape.part(i):
            raise MalformedPathSystem(f"path {i} has {len(steps)} horizontal steps")
        rows.append(tuple(a[1] for a, _ in steps))
    return LectureHallTableau(ps.shape, ps.t, tuple(rows)).validated()


# ---------------------------------------------------------------------------
# dual paths


@dataclass(frozen=True)
class DualPathSystem:
    """``m`` up-right paths on the dual graph; path ``j`` carries column ``j`` of the shape."""

    n: int
    t: int
    dual_shape: Partition
    paths: tuple[tuple[Vertex, ...], ...]

    @property
    def m(self) -> int:
        return len(self.paths)

    def start(self, j: int) -> Vertex:
        return self.n + j - 1 - self.dual_shape.part(j), 0

    def end(self, j: int) -> Vertex:
        col = self.n + j - 1
        return col, top_num(self.t, col)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "conjugate": list(self.dual_shape.parts),
            "paths": [[list(v) for v in p] for p in self.paths],
        }


def _walk_up(path: list[Vertex], target: int) -> None:
    c, m = path[-1]
    if target < m:
        raise MalformedPathSystem(f"cannot climb from {(c, m)} to num {target}")
    path.extend((c, x) for x in range(m + 1, target + 1))


def paths_to_dual(ps: PathSystem, m: int | None = None) -> DualPathSystem:
    """Drop vertical steps, lift every horizontal step by one notch, reconnect upward."""
    validate_path_system(ps)
    m = ps.shape.largest if m is None else m
    if m == 0:
        return DualPathSystem(ps.n, ps.t, Partition((0,)), ())
    dual_shape = conjugate(ps.shape, m)
    steps = {i: ps.horizontal_steps(i) for i in range(1, ps.n + 1)}
    paths = []
    for j in range(1, m + 1):
        length = dual_shape.part(j)
        start = (ps.n + j - 1 - length, 0)
        path = [start]
        for i in range(length, 0, -1):
            (c, num), _ = steps[i][j - 1]
            if c != path[-1][0]:
                raise MalformedPathSystem("dual path lost its column")
            _walk_up(path, num)
            path.append(dual_step_right(c, num))
        _walk_up(path, top_num(ps.t, path[-1][0]))
        paths.append(tuple(path))
    return DualPathSystem(ps.n, ps.t, dual_shape, tuple(paths))


def validate_dual_system(dps: DualPathSystem) -> None:
    seen: set[Vertex] = set()
    for j, path in enumerate(dps.paths, start=1):
        if not path or path[0] != dps.start(j) or path[-1] != dps.end(j):
            raise MalformedPathSystem(f"dual path {j} has wrong endpoints")
        for a, b in zip(path, path[1:]):
            if not (b == dual_step_right(*a) or (b[0] == a[0] and b[1] == a[1] + 1)):
                raise MalformedPathSystem(f"dual path {j}: {a} -> {b} is not an edge")
        for v in path:
            if not 0 <= v[1] < column_size(dps.t, v[0]):
                raise MalformedPathSystem(f"dual path {j}: vertex {v} out of range")
            if v in seen:
                raise MalformedPathSystem(f"dual paths meet at {v}")
            seen.add(v)


def dual_to_paths(dps: DualPathSystem) -> PathSystem:
    validate_dual_system(dps)
    shape = conjugate(dps.dual_shape, dps.n) if dps.m else Partition((0,) * dps.n)
    rows: list[list[int]] = [[0] * shape.part(i) for i in range(1, dps.n + 1)]
    for j, path in enumerate(dps.paths, start=1):
        horiz = [a for a, b in zip(path, path[1:]) if b[0] == a[0] + 1]
        length = dps.dual_shape.part(j)
        if len(horiz) != length:
            raise MalformedPathSystem(f"dual path {j} has {len(horiz)} horizontal steps")
        # the lowest step belongs to the deepest row
        for i, (c, num) in zip(range(length, 0, -1), horiz):
            rows[i - 1][j - 1] = num
    tableau = LectureHallTableau(shape, dps.t, tuple(map(tuple, rows)))
    if not tableau.shape.n or not _rows_ok(tableau):
        raise MalformedPathSystem("dual system does not encode a valid tableau")
    return tableau_to_paths(tableau)


def _rows_ok(tableau: LectureHallTableau) -> bool:
    from .model import is_valid_blht

    return is_valid_blht(tableau.rows, tableau.shape, tableau.t)


def vertical_usage(paths: Iterable[Sequence[Vertex]]) -> set[tuple[int, int]]:
    """Vertical unit edges used, keyed by ``(col, lower num)``."""
    used = set()
    for p in paths:
        for a, b in zip(p, p[1:]):
            if a[0] == b[0]:
                used.add((a[0], min(a[1], b[1])))
    return used


def arrival_slots(ps: PathSystem) -> set[tuple[int, int]]:
    """Vertical edges sitting directly above the landing vertex of a primal horizontal step."""
    return {(b[0], b[1]) for p in ps.paths for a, b in zip(p, p[1:]) if b[0] == a[0] + 1}


# ---------------------------------------------------------------------------
# dimers on the decorated lattice

White = tuple  # ("w", col, num) or ("W", i)
Black = tuple  # ("b", col, num) or ("B", i)
DimerEdge = tuple  # (white, black)


@dataclass(frozen=True)
class DecoratedLattice:
    """Each graph vertex split into a white/black pair, plus boundary decorations.

    * internal edge ``w(v) - b(v)``;
    * a graph edge ``u -> v`` becomes ``w(u) - b(v)``;
    * white ``("W", i)`` sits above the start of path ``i`` and touches ``b(start)``;
    * black ``("B", i)`` sits below the end of path ``i`` and touches ``w(end)``.
    """

    shape: Partition
    t: int

    @property
    def graph(self) -> LHGraph:
        return LHGraph(self.t, graph_width(self.shape))

    def whites(self) -> list[White]:
        return [("w", c, m) for c, m in self.graph.vertices()] + [("W", i) for i in range(1, self.shape.n + 1)]

    def blacks(self) -> list[Black]:
        return [("b", c, m) for c, m in self.graph.vertices()] + [("B", i) for i in range(1, self.shape.n + 1)]

    def edges(self) -> list[DimerEdge]:
        g = self.graph
        out = [(("w", *v), ("b", *v)) for v in g.vertices()]
        out += [(("w", *u), ("b", *v)) for u, v in g.edges()]
        n = self.shape.n
        for i in range(1, n + 1):
            col = n - i
            out.append((("W", i), ("b", col, top_num(self.t, col))))
        for i in range(1, n + 1):
            out.append((("w", self.shape.endpoint(i), 0), ("B", i)))
        return out

    def faces(self) -> list[list[DimerEdge]]:
        """Boundary edges of every bounded face, one list per face.

        The face between the horizontal edges leaving ``(c, k)`` and
        ``(c, k+1)`` is a hexagon when the landing points are adjacent and an
        octagon when one vertex of column ``c+1`` lies strictly between them.
        """
        g = self.graph
        faces = []
        for c in range(g.width):
            for k in range(column_size(self.t, c) - 1):
                low = step_right(c, k)[1]
                high = step_right(c, k + 1)[1]
                edges = [(("w", c, k + 1), ("b", c + 1, high))]
                # down the right side
                for m in range(high, low, -1):
                    edges.append((("w", c + 1, m), ("b", c + 1, m)))
                    edges.append((("w", c + 1, m), ("b", c + 1, m - 1)))
                # back along the lower horizontal edge and up the left side
                edges.append((("w", c, k), ("b", c + 1, low)))
                edges.append((("w", c, k), ("b", c, k)))
                edges.append((("w", c, k + 1), ("b", c, k)))
                faces.append(edges)
        return faces


@dataclass(frozen=True)
class DimerConfiguration:
    lattice: DecoratedLattice
    matching: frozenset

    def is_perfect(self) -> bool:
        edge_set = set(self.lattice.edges())
        if not self.matching <= edge_set:
            return False
        whites = [w for w, _ in self.matching]
        blacks = [b for _, b in self.matching]
        return (
            len(set(whites)) == len(whites) == len(self.lattice.whites())
            and len(set(blacks)) == len(blacks) == len(self.lattice.blacks())
        )

    def sorted_edges(self) -> list[DimerEdge]:
        return sorted(self.matching, key=edge_sort_key)


def edge_sort_key(edge: DimerEdge):
    w, b = edge
    return (tuple(str(x) for x in w), tuple(str(x) for x in b))


def vertex_label(v: tuple) -> str:
    return ":".join(str(x) for x in v)


def parse_vertex_label(text: str) -> tuple:
    parts = text.strip().split(":")
    return (parts[0], *(int(p) for p in parts[1:]))


def paths_to_dimers(ps: PathSystem) -> DimerConfiguration:
    validate_path_system(ps)
    lattice = DecoratedLattice(ps.shape, ps.t)
    used: set[Vertex] = set()
    matching = set()
    for p in ps.paths:
        used.update(p)
        for a, b in zip(p, p[1:]):
            matching.add((("w", *a), ("b", *b)))
    for v in lattice.graph.vertices():
        if v not in used:
            matching.add((("w", *v), ("b", *v)))
    for i in range(1, ps.n + 1):
        matching.add((("W", i), ("b", *ps.start(i))))
        matching.add((("w", *ps.end(i)), ("B", i)))
    return DimerConfiguration(lattice, frozenset(matching))


def dimers_to_paths(config: DimerConfiguration) -> PathSystem:
    """Follow non-internal dimers from each top decoration down to the floor."""
    shape, t = config.lattice.shape, config.lattice.t
    by_white = {w: b for w, b in config.matching}
    paths = []
    for i in range(1, shape.n + 1):
        b = next(b for w, b in config.matching if w == ("W", i))
        path = [(b[1], b[2])]
        while True:
            nxt = by_white.get(("w", *path[-1]))
            if nxt is None:
                raise MalformedPathSystem("dangling white vertex")
            if nxt[0] == "B":
                break
            if (nxt[1], nxt[2]) == path[-1]:
                raise MalformedPathSystem("path runs into an internal dimer")
            path.append((nxt[1], nxt[2]))
        paths.append(tuple(path))
    ps = PathSystem(shape, t, tuple(paths))
    validate_path_system(ps)
    return ps


# ---------------------------------------------------------------------------
# height function


@dataclass(frozen=True)
class HeightFunction:
    """Heights of the bounded faces, keyed by ``(col, k)``.

    Face ``(col, k)`` lies between the horizontal edges leaving ``(col, k)``
    and ``(col, k+1)``; its centre is at ``x = col + 1/2`` and roughly
    ``y = (k + 1/2) / (col + 1)``.  ``outer`` is the height of the unbounded
    face to the upper right, which every path passes south-west of.
    """

    values: dict
    outer: int

    def __getitem__(self, face: tuple[int, int]) -> int:
        return self.values[face]

    def column(self, col: int) -> list[int]:
        ks = sorted(k for c, k in self.values if c == col)
        return [self.values[(col, k)] for k in ks]


def height_function(ps: PathSystem) -> HeightFunction:
    """Count the paths lying south-west of each face.

    In the strip between columns ``c`` and ``c+1`` a path is south-west of
    face ``(c, k)`` when it crosses the strip along a horizontal edge leaving
    ``(c, s)`` with ``s <= k``, or when it has already reached the floor in a
    column ``<= c``.  Paths that start in column ``c+1`` or later lie to the
    north-east.
    """
    validate_path_system(ps)
    width = graph_width(ps.shape)
    crossing: dict[tuple[int, int], int] = {}
    for i in range(1, ps.n + 1):
        for (c, num), _ in ps.horizontal_steps(i):
            crossing[(i, c)] = num
    values = {}
    for c in range(width):
        for k in range(column_size(ps.t, c) - 1):
            h = 0
            for i in range(1, ps.n + 1):
                if ps.shape.endpoint(i) <= c:
                    h += 1
                elif (i, c) in crossing and crossing[(i, c)] <= k:
                    h += 1
            values[(c, k)] = h
    return HeightFunction(values, ps.n)
