"""Partitions, bounded lecture hall tableaux and limiting profiles.

Rows and columns are 1-indexed in the public API (cell ``(1, 1)`` is the top
left corner) because the inequalities are naturally written that way.
Internally rows are stored as 0-indexed tuples.

The quantity ``d = n - i + j`` (the *denominator* of cell ``(i, j)``) shows up
everywhere: entry ``T(i, j)`` lives in ``[0, t*d)`` and neighbouring cells are
compared through the ratios ``T(i, j) / d``.  All comparisons are done by
integer cross-multiplication.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (
    InvalidTableau,
    MTooSmall,
    NegativePart,
    NotWeaklyDecreasing,
    ShapeMismatch,
)


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing nonnegative parts; trailing zeros are kept."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("a partition needs at least one part")
        for p in parts:
            if p < 0:
                raise NegativePart(f"part {p} is negative in {parts}")
        for a, b in zip(parts, parts[1:]):
            if b > a:
                raise NotWeaklyDecreasing(f"{parts} is not weakly decreasing")

    @property
    def n(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0]

    def part(self, i: int) -> int:
        return self.parts[i - 1]

    def endpoint(self, i: int) -> int:
        """Column ``lambda_i + n - i`` where the i-th path reaches the floor."""
        return self.parts[i - 1] + self.n - i

    def cells(self) -> Iterator[tuple[int, int]]:
        """Cells in row-major order, 1-indexed."""
        for i, length in enumerate(self.parts, start=1):
            for j in range(1, length + 1):
                yield i, j

    def __str__(self):
        return ",".join(str(p) for p in self.parts)


def make_partition(parts: Iterable[int]) -> Partition:
    return Partition(tuple(parts))


def parse_partition(text: str) -> Partition:
    """Parse ``"4,3,1,0,0"`` (spaces tolerated)."""
    items = [s for s in text.replace(" ", "").split(",") if s != ""]
    return Partition(tuple(int(s) for s in items))


def conjugate(p: Partition, m: int | None = None) -> Partition:
    """Conjugate partition with exactly ``m`` parts (default ``lambda_1``).

    An empty shape conjugated with the default length yields ``(0,)`` since a
    partition always carries at least one part.
    """
    if m is None:
        m = max(p.largest, 1)
    if m < p.largest:
        raise MTooSmall(f"m={m} is smaller than the largest part {p.largest}")
    return Partition(tuple(sum(1 for x in p.parts if x >= k) for k in range(1, m + 1)))


def denominator(n: int, i: int, j: int) -> int:
    return n - i + j


@dataclass(frozen=True)
class LectureHallTableau:
    """A filling of a shape with a bound ``t``.

    Construction checks only that the rows fit the shape; use
    :func:`is_valid_blht` or :meth:`validated` to check the inequalities.
    """

    shape: Partition
    t: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        _check_rows_fit(rows, self.shape)
        if self.t < 1:
            raise ValueError("the bound t must be positive")

    @property
    def n(self) -> int:
        return self.shape.n

    def __getitem__(self, cell: tuple[int, int]) -> int:
        i, j = cell
        return self.rows[i - 1][j - 1]

    def validated(self) -> "LectureHallTableau":
        if not is_valid_blht(self.rows, self.shape, self.t):
            raise InvalidTableau(f"rows {self.rows} violate the lecture hall conditions")
        return self

    def replace(self, cell: tuple[int, int], value: int) -> "LectureHallTableau":
        i, j = cell
        rows = [list(r) for r in self.rows]
        rows[i - 1][j - 1] = value
        return LectureHallTableau(self.shape, self.t, tuple(map(tuple, rows)))

    def flat(self) -> tuple[int, ...]:
        return tuple(v for r in self.rows for v in r)

    def leq(self, other: "LectureHallTableau") -> bool:
        return all(a <= b for a, b in zip(self.flat(), other.flat()))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "lambda": list(self.shape.parts),
            "rows": [list(r) for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "LectureHallTableau":
        shape = Partition(tuple(doc["lambda"]))
        if "n" in doc and int(doc["n"]) != shape.n:
            raise ShapeMismatch(f"n={doc['n']} but lambda has {shape.n} parts")
        rows = tuple(tuple(r) for r in doc["rows"])
        # tolerate omitted empty rows at the bottom
        rows = rows + ((),) * (shape.n - len(rows))
        return cls(shape, int(doc["t"]), rows)

    @classmethod
    def from_json(cls, text: str) -> "LectureHallTableau":
        return cls.from_dict(json.loads(text))

    def __str__(self):
        return "\n".join(" ".join(str(v) for v in r) for r in self.rows if r)


def _check_rows_fit(rows: Sequence[Sequence[int]], shape: Partition) -> None:
    if len(rows) != shape.n:
        raise ShapeMismatch(f"{len(rows)} rows given for {shape.n} parts")
    for i, (row, length) in enumerate(zip(rows, shape.parts), start=1):
        if len(row) != length:
            raise ShapeMismatch(f"row {i} has {len(row)} entries, expected {length}")


def is_valid_blht(entries: Sequence[Sequence[int]], shape: Partition, t: int) -> bool:
    """Check the bound, row and column conditions exactly.

    For a cell with denominator ``d``:

    * ``0 <= T(i,j) < t*d``
    * ``T(i,j) * (d+1) >= T(i,j+1) * d``   (ratios weakly decrease along rows)
    * ``T(i,j) * (d-1) >  T(i+1,j) * d``   (ratios strictly decrease down columns)
    """
    rows = [list(r) for r in entries]
    rows += [[] for _ in range(shape.n - len(rows))]
    _check_rows_fit(rows, shape)
    n = shape.n
    for r, row in enumerate(rows):
        i = r + 1
        for c, v in enumerate(row):
            d = n - i + c + 1
            if v < 0 or v >= t * d:
                return False
            if c + 1 < len(row) and v * (d + 1) < row[c + 1] * d:
                return False
            if r + 1 < n and c < len(rows[r + 1]) and v * (d - 1) <= rows[r + 1][c] * d:
                return False
    return True


def extremal_tableaux(shape: Partition, t: int) -> tuple[LectureHallTableau, LectureHallTableau]:
    """Cellwise minimum ``n - i`` and maximum ``t(n-i+j) - j``."""
    n = shape.n
    low = tuple(tuple(n - i for _ in range(1, shape.part(i) + 1)) for i in range(1, n + 1))
    high = tuple(
        tuple(t * (n - i + j) - j for j in range(1, shape.part(i) + 1)) for i in range(1, n + 1)
    )
    return LectureHallTableau(shape, t, low), LectureHallTableau(shape, t, high)


# ---------------------------------------------------------------------------
# limiting profiles


@dataclass(frozen=True)
class Segment:
    """``alpha(u) = intercept + slope * u`` on ``[u_start, u_end]``."""

    u_start: float
    u_end: float
    slope: float
    intercept: float

    def value(self, u: float) -> float:
        return self.intercept + self.slope * u

    @property
    def top(self) -> float:
        return self.value(self.u_start)

    @property
    def bottom(self) -> float:
        return self.value(self.u_end)

    @property
    def is_plateau(self) -> bool:
        # constant runs of parts move the endpoints down by exactly one per row
        return abs(self.slope + 1.0) < 1e-12


@dataclass(frozen=True)
class Jump:
    u: float
    size: float
    lower_value: float


@dataclass(frozen=True)
class Profile:
    """Piecewise-linear non-increasing function on ``[0, U]``.

    Jumps sit at segment boundaries and are treated as half-open: the segment
    to the left owns the boundary point.
    """

    segments: tuple[Segment, ...]
    name: str = ""
    tol: float = field(default=1e-12, compare=False)

    def __post_init__(self):
        segs = tuple(s if isinstance(s, Segment) else Segment(*map(float, s)) for s in self.segments)
        object.__setattr__(self, "segments", segs)

    @property
    def domain_end(self) -> float:
        return self.segments[-1].u_end

    def value(self, u: float) -> float:
        for s in self.segments:
            if u <= s.u_end + self.tol:
                return s.value(u)
        raise ValueError(f"u={u} outside the profile domain")

    def value_right(self, u: float) -> float:
        """Right limit at ``u`` (differs from :meth:`value` only at jumps)."""
        for s in self.segments:
            if u < s.u_end - self.tol:
                return s.value(u)
        return self.segments[-1].value(u)

    def jumps(self) -> list[Jump]:
        out = []
        for left, right in zip(self.segments, self.segments[1:]):
            gap = left.bottom - right.top
            if gap > self.tol:
                out.append(Jump(left.u_end, gap, right.top))
        return out

    def check_admissible(self) -> None:
        from .errors import InadmissibleProfile

        if not self.segments:
            raise InadmissibleProfile("profile has no segments")
        if abs(self.segments[0].u_start) > self.tol:
            raise InadmissibleProfile("profile must start at u=0")
        for s in self.segments:
            if not s.u_start < s.u_end:
                raise InadmissibleProfile(f"empty segment {s}")
            if s.slope > self.tol:
                raise InadmissibleProfile(f"increasing segment {s}")
            if s.bottom < -self.tol:
                raise InadmissibleProfile(f"negative value on {s}")
        for left, right in zip(self.segments, self.segments[1:]):
            if abs(left.u_end - right.u_start) > self.tol:
                raise InadmissibleProfile("segments must tile the domain without gaps")
            if right.top > left.bottom + self.tol:
                raise InadmissibleProfile("upward jump")

    def to_list(self) -> list[list[float]]:
        return [[s.u_start, s.u_end, s.slope, s.intercept] for s in self.segments]

    @classmethod
    def from_list(cls, data: Sequence[Sequence[float]], name: str = "") -> "Profile":
        return cls(tuple(Segment(*map(float, row)) for row in data), name=name)


def linear_profile(top: float, slope: float, length: float = 1.0, name: str = "") -> Profile:
    return Profile((Segment(0.0, length, slope, top),), name=name)


def builtin_profile(name: str, p: int = 2) -> Profile:
    """Named limiting profiles of the standard examples.

    ``square``          all parts equal to n                 alpha = 2 - u
    ``staircase``       parts n, n-1, ..., 1                 alpha = 2 - 2u
    ``square-p``        all parts (p-1)n                     alpha = p - u
    ``staircase-p``     parts (p-1)n, (p-1)(n-1), ...        alpha = p(1 - u)
    ``cusp-empty``      n parts 2n followed by n, ..., 1     alpha = 4-u, then 4-2u
    ``cusp-vertical``   2n, ..., n+1 followed by n parts n   alpha = 4-2u, then 3-u
    """
    if name == "square":
        return linear_profile(2.0, -1.0, name=name)
    if name == "staircase":
        return linear_profile(2.0, -2.0, name=name)
    if name == "square-p":
        return linear_profile(float(p), -1.0, name=f"square-p{p}")
    if name == "staircase-p":
        return linear_profile(float(p), -float(p), name=f"staircase-p{p}")
    if name == "cusp-empty":
        return Profile((Segment(0, 1, -1, 4), Segment(1, 2, -2, 4)), name=name)
    if name == "cusp-vertical":
        return Profile((Segment(0, 1, -2, 4), Segment(1, 2, -1, 3)), name=name)
    raise KeyError(f"unknown profile {name!r}")


BUILTIN_PROFILES = ("square", "staircase", "square-p", "staircase-p", "cusp-empty", "cusp-vertical")


def profile_from_partition(shape: Partition, scale: int | None = None) -> Profile:
    """Piecewise-linear profile through ``(i/scale, (lambda_i + n - i)/scale)``.

    ``scale`` defaults to the number of parts.  Consecutive rows are grouped
    by the gap ``lambda_i - lambda_{i+1}``: equal parts give slope -1, a gap
    ``g`` gives slope ``-(g + 1)``, and an isolated gap of at least 2 (one that
    does not repeat in a neighbouring row) is read as a jump.  Each run of
    equal slopes becomes one segment; the first segment is extended down to
    ``u = 0``.
    """
    n = shape.n
    scale = n if scale is None else scale
    ends = [shape.endpoint(i) for i in range(1, n + 1)]
    gaps = [shape.parts[k] - shape.parts[k + 1] for k in range(n - 1)]
    is_jump = []
    for k, g in enumerate(gaps):
        repeated = (k > 0 and gaps[k - 1] == g) or (k + 1 < len(gaps) and gaps[k + 1] == g)
        is_jump.append(g >= 2 and not repeated)

    def through(k: int, slope: float) -> float:
        return ends[k] / scale - slope * (k + 1) / scale

    segments: list[Segment] = []
    cursor = 0.0
    for k, g in enumerate(gaps):
        u_k, u_next = (k + 1) / scale, (k + 2) / scale
        if is_jump[k]:
            if u_k > cursor:  # row k is not attached to any linear piece yet
                segments.append(Segment(cursor, u_k, -1.0, through(k, -1.0)))
            cursor = u_k
        else:
            slope = -(g + 1.0)
            segments.append(Segment(cursor, u_next, slope, through(k, slope)))
            cursor = u_next
    if n == 1 or is_jump[-1]:
        segments.append(Segment(cursor, n / scale, -1.0, through(n - 1, -1.0)))
    return Profile(tuple(_merge(segments)))


def _merge(segments: list[Segment]) -> list[Segment]:
    out: list[Segment] = []
    for s in segments:
        if out and out[-1].slope == s.slope and abs(out[-1].bottom - s.top) < 1e-12:
            out[-1] = Segment(out[-1].u_start, s.u_end, s.slope, out[-1].intercept)
        else:
            out.append(s)
    return out
