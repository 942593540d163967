"""Explicit solutions of the complex Burgers equation ``u u_x + u_y = 0``.

Three solutions on the rectangle ``[0, 2] x [0, 1]`` are provided, each of
the form ``(linear + sqrt(D)) / denominator`` with ``D`` quadratic in ``y``:

``staircase``  ``((x-1) y + sqrt(x(x-2) + y^2)) / (y^2 - 1)``
``square``     ``((x-1)(1-2y) - sqrt((x-1)^2 - 4y + 4y^2)) / (2(y - y^2))``
``square-p``   ``(1 + x + p(y-1) - 2xy + sqrt(D_p)) / (2(y - y^2))``

The liquid region is where ``D < 0``; there ``u`` is non-real.

Each solution is also a solution of an implicit characteristic relation
``Q(z) + U - 1 = 0`` after a change of variables that preserves the
equation (see :data:`CHARACTERISTICS`).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainBoundary

EXAMPLES = ("staircase", "square", "square-p")
DEFAULT_H = 1e-5


def _check_point(example: str, x: float, y: float) -> None:
    if not (0 <= x <= 2 and 0 <= y <= 1):
        raise DomainBoundary(f"({x}, {y}) is outside [0,2]x[0,1]")
    if y in (0, 1):
        raise DomainBoundary(f"y={y} is on the boundary where the denominator vanishes")
    if example not in EXAMPLES:
        raise KeyError(f"unknown example {example!r}")


def discriminant(example: str, x, y, p: int = 2):
    """The quantity under the square root; works on scalars and arrays."""
    if example == "staircase":
        return (x - 2) * x + y**2
    if example == "square":
        return (x - 1) ** 2 - 4 * y + 4 * y**2
    if example == "square-p":
        return (1 + x) ** 2 + 2 * p * (1 + x) * (y - 1) + p**2 * (y - 1) ** 2 - 4 * x * y
    raise KeyError(f"unknown example {example!r}")


def _u(example: str, x: complex, y: complex, p: int) -> complex:
    root = cmath.sqrt(discriminant(example, x, y, p))
    if example == "staircase":
        return ((x - 1) * y + root) / (y**2 - 1)
    if example == "square":
        return (-1 + x - 2 * (-1 + x) * y - root) / (2 * (y - y**2))
    return (1 + x + p * (-1 + y) - 2 * x * y + root) / (2 * (y - y**2))


def burgers_solution(example: str, x: float, y: float, p: int = 2) -> complex:
    """Principal-branch value of the solution at ``(x, y)``."""
    _check_point(example, x, y)
    return _u(example, complex(x), complex(y), p)


def is_liquid(example: str, x: float, y: float, p: int = 2) -> bool:
    return discriminant(example, x, y, p) < 0


def distance_to_locus(example: str, x: float, y: float, p: int = 2) -> float:
    """First-order distance ``|D| / |grad D|`` to the curve ``D = 0``."""
    d = discriminant(example, x, y, p)
    eps = 1e-6
    gx = (discriminant(example, x + eps, y, p) - discriminant(example, x - eps, y, p)) / (2 * eps)
    gy = (discriminant(example, x, y + eps, p) - discriminant(example, x, y - eps, p)) / (2 * eps)
    g = math.hypot(gx, gy)
    return abs(d) / g if g > 0 else math.inf


def burgers_residual(example: str, x: float, y: float, h: float | None = None, p: int = 2) -> float:
    """``|u u_x + u_y|`` with fourth-order central differences.

    Derivatives of ``u`` blow up like ``|D|^(-1/2)`` at the arctic curve, so a
    fixed step is either too coarse next to it or too noisy far from it.  By
    default the step is ``min(1e-5, dist / 100)`` with ``dist`` the distance
    to ``D = 0``.
    """
    _check_point(example, x, y)
    if h is None:
        h = min(DEFAULT_H, distance_to_locus(example, x, y, p) / 100)
    if not (2 * h <= x <= 2 - 2 * h and 2 * h <= y <= 1 - 2 * h):
        raise DomainBoundary("stencil leaves the domain")

    def f(a: float, b: float) -> complex:
        return _u(example, complex(a), complex(b), p)

    ux = (-f(x + 2 * h, y) + 8 * f(x + h, y) - 8 * f(x - h, y) + f(x - 2 * h, y)) / (12 * h)
    uy = (-f(x, y + 2 * h) + 8 * f(x, y + h) - 8 * f(x, y - h) + f(x, y - 2 * h)) / (12 * h)
    return abs(f(x, y) * ux + uy)


# ---------------------------------------------------------------------------
# characteristic relations


def q_staircase(z: complex) -> complex:
    return 1 - 1 / (4 * z) + z


def q_square(z: complex) -> complex:
    return 1 - 1 / z + z


def q_square_p(z: complex, p: int) -> complex:
    """Reduces to :func:`q_square` at ``p = 2``."""
    return (p - 1) * (1 - 1 / z) + z


@dataclass(frozen=True)
class Characteristic:
    """``Q`` together with the variable change ``(x, y, u) -> (X, Y, U)``.

    The relation checked is ``Q(X - Y U) + U - 1 = 0``.  Every change used
    here maps solutions of ``u u_x + u_y = 0`` to solutions.
    """

    q: Callable[[complex], complex]
    change: Callable[[float, float, complex], tuple[complex, complex, complex]]
    description: str


def _staircase_change(x, y, u):
    # swap the roles of x and y (u -> 1/u), then halve both coordinates
    return y / 2, x / 2, 1 / u


def _shift_change(shift: float):
    def change(x, y, u):
        return x - shift, y, u

    return change


def characteristic(example: str, p: int = 2) -> Characteristic:
    if example == "staircase":
        return Characteristic(q_staircase, _staircase_change, "(x, y, u) -> (y/2, x/2, 1/u)")
    if example == "square":
        return Characteristic(q_square, _shift_change(1.0), "(x, y, u) -> (x - 1, y, u)")
    if example == "square-p":
        return Characteristic(
            lambda z: q_square_p(z, p), _shift_change(p - 1.0), f"(x, y, u) -> (x - {p - 1}, y, u)"
        )
    raise KeyError(f"unknown example {example!r}")


def characteristic_residual(example: str, x: float, y: float, p: int = 2) -> float:
    u = burgers_solution(example, x, y, p)
    ch = characteristic(example, p)
    X, Y, U = ch.change(x, y, u)
    return abs(ch.q(X - Y * U) + U - 1)


# ---------------------------------------------------------------------------
# grids, loci and distances


def liquid_grid(example: str, size: int = 32, p: int = 2) -> list[tuple[float, float]]:
    """Cell centres of a ``size x size`` grid on the rectangle with ``D < 0``."""
    pts = []
    for i in range(size):
        for j in range(size):
            x, y = 2 * (i + 0.5) / size, (j + 0.5) / size
            if is_liquid(example, x, y, p):
                pts.append((x, y))
    return pts


def discriminant_locus(example: str, count: int = 2000, p: int = 2) -> np.ndarray:
    """Points of ``D = 0`` inside the rectangle.

    ``D`` is quadratic in ``y`` for fixed ``x``; its real roots in ``[0, 1]``
    are collected over ``count`` values of ``x`` spaced as ``1 - cos``, which
    crowds samples near the ends where the locus turns vertical.
    """
    xs = 1 - np.cos(np.linspace(0, math.pi, count))
    out = []
    for x in xs:
        c0 = discriminant(example, x, 0.0, p)
        c1 = discriminant(example, x, 1.0, p)
        cm = discriminant(example, x, 0.5, p)
        # fit a y^2 + b y + c through three exact evaluations
        a = 2 * (c1 + c0 - 2 * cm)
        b = c1 - c0 - a
        if abs(a) < 1e-15:
            roots = [-c0 / b] if b else []
        else:
            disc = b * b - 4 * a * c0
            if disc < 0 and disc > -1e-12 * (b * b + abs(4 * a * c0)):
                disc = 0.0  # a double root blurred by rounding
            if disc < 0:
                continue
            r = math.sqrt(disc)
            roots = sorted({(-b - r) / (2 * a), (-b + r) / (2 * a)})
        for root in roots:
            if -1e-12 <= root <= 1 + 1e-12:
                out.append((float(x), float(min(max(root, 0.0), 1.0))))
    return np.array(out)


def _segment_distances(points: np.ndarray, polyline: np.ndarray, tree: cKDTree) -> np.ndarray:
    """Distance from each point to a polyline, via its nearest vertex's two segments."""
    _, idx = tree.query(points)
    best = np.linalg.norm(points - polyline[idx], axis=1)
    for offset in (-1, 0):
        a_idx = idx + offset
        ok = (a_idx >= 0) & (a_idx + 1 < len(polyline))
        a = polyline[np.clip(a_idx, 0, len(polyline) - 2)]
        b = polyline[np.clip(a_idx + 1, 1, len(polyline) - 1)]
        ab = b - a
        denom = np.maximum((ab * ab).sum(axis=1), 1e-300)
        s = np.clip(((points - a) * ab).sum(axis=1) / denom, 0, 1)
        proj = a + s[:, None] * ab
        d = np.linalg.norm(points - proj, axis=1)
        best = np.where(ok, np.minimum(best, d), best)
    return best


def polyline_distance(points: np.ndarray, polylines: Sequence[np.ndarray]) -> np.ndarray:
    """Distance from every point to the union of the polylines."""
    points = np.asarray(points, dtype=float)
    best = np.full(len(points), np.inf)
    for line in polylines:
        line = np.asarray(line, dtype=float)
        if len(line) == 0:
            continue
        if len(line) == 1:
            best = np.minimum(best, np.linalg.norm(points - line[0], axis=1))
            continue
        best = np.minimum(best, _segment_distances(points, line, cKDTree(line)))
    return best


def hausdorff_distance(
    curve_a: Sequence[np.ndarray], curve_b: Sequence[np.ndarray]
) -> float:
    """Symmetric Hausdorff distance between two unions of polylines.

    Vertices of one curve are measured against the segments of the other, so
    the result is exact for the polylines and is within the chord error of
    the underlying smooth curves.
    """
    pts_a = np.vstack([np.asarray(c, dtype=float) for c in curve_a if len(c)])
    pts_b = np.vstack([np.asarray(c, dtype=float) for c in curve_b if len(c)])
    return float(max(polyline_distance(pts_a, curve_b).max(), polyline_distance(pts_b, curve_a).max()))


def locus_polylines(example: str, count: int = 2000, p: int = 2) -> list[np.ndarray]:
    """The discriminant locus split into its lower and upper arcs, each ordered in x."""
    pts = discriminant_locus(example, count, p)
    if example == "staircase":
        return [pts]
    mid = 0.5 if example == "square" else None
    if mid is None:
        return [pts]
    return [pts[pts[:, 1] <= mid], pts[pts[:, 1] >= mid]]


# ---------------------------------------------------------------------------
# exploratory comparison with sampled height functions


@dataclass
class HeightReport:
    example: str
    samples: int
    grid: list[tuple[float, float]] = field(default_factory=list)
    dh_dy: list[float] = field(default_factory=list)
    dh_dx: list[float] = field(default_factory=list)
    im_u_over_pi: list[float] = field(default_factory=list)
    arg_u_over_pi_minus_1: list[float] = field(default_factory=list)
    correlation_y: float | None = None
    correlation_x: float | None = None
    mean_abs_gap_y: float | None = None
    mean_abs_gap_x: float | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _corr(a: list[float], b: list[float]) -> float | None:
    if len(a) < 2 or np.std(a) == 0 or np.std(b) == 0:
        return None
    return float(np.corrcoef(a, b)[0, 1])


def conjecture_height_check(samples, example: str, grid: int = 16, p: int = 2, arg_shift: float = 0.0) -> HeightReport:
    """Mean rescaled height gradients against ``Im(u)/pi`` and ``arg(u)/pi - 1``.

    ``samples`` are path systems of one shape with ``t = n``.  Heights are
    divided by ``n`` and placed at face centres ``(col + 1/2, (k + 1/2)/(col + 1))``
    divided by ``n``; gradients are central differences on a ``grid x grid``
    lattice of the rectangle.  ``arg_shift`` selects the branch of ``arg``
    (added in units of pi).  Nothing is asserted.
    """
    from .lattice import height_function

    samples = list(samples)
    report = HeightReport(example, len(samples))
    if not samples:
        return report
    n = samples[0].n
    t = samples[0].t
    acc = np.zeros((grid + 1, grid + 1))
    hits = np.zeros((grid + 1, grid + 1))
    for ps in samples:
        hf = height_function(ps)
        for (c, k), h in hf.values.items():
            X = (c + 0.5) / n
            Y = (k + 0.5) / (c + 1) / t
            i, j = int(round(X / 2 * grid)), int(round(Y * grid))
            if 0 <= i <= grid and 0 <= j <= grid:
                acc[i, j] += h / n
                hits[i, j] += 1
    with np.errstate(invalid="ignore"):
        mean = acc / hits
    dx, dy = 2 / grid, 1 / grid
    for i in range(1, grid):
        for j in range(1, grid):
            x, y = i * dx, j * dy
            vals = [mean[i + 1, j], mean[i - 1, j], mean[i, j + 1], mean[i, j - 1]]
            if any(np.isnan(v) for v in vals):
                continue
            try:
                u = burgers_solution(example, x, y, p)
            except DomainBoundary:
                continue
            report.grid.append((x, y))
            report.dh_dx.append(float((vals[0] - vals[1]) / (2 * dx)))
            report.dh_dy.append(float((vals[2] - vals[3]) / (2 * dy)))
            report.im_u_over_pi.append(u.imag / math.pi)
            report.arg_u_over_pi_minus_1.append(cmath.phase(u) / math.pi + arg_shift - 1)
    report.correlation_y = _corr(report.dh_dy, report.im_u_over_pi)
    report.correlation_x = _corr(report.dh_dx, report.arg_u_over_pi_minus_1)
    if report.grid:
        report.mean_abs_gap_y = float(np.mean(np.abs(np.subtract(report.dh_dy, report.im_u_over_pi))))
        report.mean_abs_gap_x = float(
            np.mean(np.abs(np.subtract(report.dh_dx, report.arg_u_over_pi_minus_1)))
        )
    return report
