"""Arctic curves of piecewise-linear profiles via the tangent-line envelope.

For a profile ``alpha`` on ``[0, U]`` and bound ratio ``tau`` the curve is
traced by

    X(x) = x^2 I'(x) / (I(x) + x I'(x)),    Y(x) = tau / (I(x) + x I'(x)),

where ``I(x) = exp(-int_0^U du / (x - alpha(u)))``.  Each linear piece of
``alpha`` contributes one closed-form factor to ``I``:

* slope ``m`` (not -1): ``|(x - alpha(u1)) / (x - alpha(u0))|^(1/m)``, only
  defined for ``x`` outside the value range of the piece;
* slope -1: the signed rational factor ``(x - alpha(u0)) / (x - alpha(u1))``.
  Its absolute value is the principal value of the integral; the sign is the
  branch that keeps ``Y >= 0`` on the branches running through the piece;
* slope 0 at level ``c``: ``exp(-(u1 - u0) / (x - c))``.

``I'`` is assembled with the product rule so that a simple zero of ``I``
(for instance ``x = 2`` for ``alpha = 2 - u``) is handled exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DegenerateDenominator, SingularAtX, UndefinedAtX
from .model import Profile, Segment

BRANCH_KINDS = (
    "first-path",
    "last-path",
    "first-dual",
    "last-dual",
    "empty-freezing",
    "vertical-freezing",
)


# ---------------------------------------------------------------------------
# the integral I and its derivative


def _factor(seg: Segment, x: float) -> tuple[float, float]:
    """Value and derivative of the factor a single segment contributes to I."""
    length = seg.u_end - seg.u_start
    if length <= 0:
        return 1.0, 0.0
    if seg.slope == 0:
        if x == seg.top:
            raise SingularAtX(f"x={x} equals the level of a flat piece")
        f = math.exp(-length / (x - seg.top))
        return f, f * length / (x - seg.top) ** 2
    b0, b1 = x - seg.top, x - seg.bottom
    if seg.is_plateau:
        if b1 == 0:
            raise SingularAtX(f"x={x} is a pole at the foot of a slope -1 piece")
        return b0 / b1, (b1 - b0) / b1**2
    lo, hi = sorted((seg.bottom, seg.top))
    if lo < x < hi:
        raise UndefinedAtX(f"x={x} lies inside the value range [{lo}, {hi}] of a piece with slope {seg.slope}")
    if b0 == 0 or b1 == 0:
        raise SingularAtX(f"x={x} equals an endpoint value of a piece with slope {seg.slope}")
    e = 1.0 / seg.slope
    f = abs(b1 / b0) ** e
    return f, f * e * (1.0 / b1 - 1.0 / b0)


def _factors(profile: Profile, x: float) -> list[tuple[float, float]]:
    return [_factor(seg, float(x)) for seg in profile.segments]


def integral_I(profile: Profile, x: float) -> float:
    """Closed-form ``I(x)`` with the branch sign on slope -1 pieces."""
    out = 1.0
    for f, _ in _factors(profile, x):
        out *= f
    return out


def integral_I_prime(profile: Profile, x: float) -> float:
    factors = _factors(profile, x)
    total = 0.0
    for k, (_, df) in enumerate(factors):
        term = df
        for j, (f, _) in enumerate(factors):
            if j != k:
                term *= f
        total += term
    return total


def integral_I_quadrature(profile: Profile, x: float) -> float:
    """``exp(-p.v. int du / (x - alpha(u)))`` by adaptive quadrature.

    Pieces whose value range contains ``x`` are integrated with a Cauchy
    weight, which is the principal value.  The result is therefore compared
    with ``|I(x)|``.
    """
    total = 0.0
    for seg in profile.segments:
        a, m = seg.intercept, seg.slope
        lo, hi = sorted((seg.bottom, seg.top))
        if m != 0 and lo < x < hi:
            # 1/(x - a - m u) = (-1/m) / (u - (x - a)/m)
            val, _ = integrate.quad(
                lambda u: -1.0 / m, seg.u_start, seg.u_end, weight="cauchy", wvar=(x - a) / m
            )
        else:
            val, _ = integrate.quad(
                lambda u: 1.0 / (x - a - m * u), seg.u_start, seg.u_end, epsabs=1e-14, epsrel=1e-13
            )
        total += val
    return math.exp(-total)


@dataclass(frozen=True)
class ProfileIntegral:
    """``I`` and ``I'`` for one profile.

    ``principal_value[k]`` records whether piece ``k`` is evaluated as a
    principal value (slope -1 pieces) or must keep ``x`` outside its range.
    """

    profile: Profile
    principal_value: tuple[bool, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "principal_value", tuple(s.is_plateau for s in self.profile.segments))

    def __call__(self, x: float) -> float:
        return integral_I(self.profile, x)

    def derivative(self, x: float) -> float:
        return integral_I_prime(self.profile, x)


# ---------------------------------------------------------------------------
# points and tangent lines


def curve_point(profile: Profile, tau: float, x: float) -> tuple[float, float]:
    i_val = integral_I(profile, x)
    i_der = integral_I_prime(profile, x)
    denom = i_val + x * i_der
    if denom == 0 or not math.isfinite(denom):
        raise DegenerateDenominator(f"I + x I' = {denom} at x={x}")
    return x * x * i_der / denom, tau / denom


def vanishing_order(profile: Profile, x: float) -> float:
    """Total exponent ``E`` with ``I(x') ~ |x' - x|^E`` as ``x' -> x``."""
    order = 0.0
    for seg in profile.segments:
        if seg.u_end <= seg.u_start or seg.slope == 0:
            continue
        e = 1.0 if seg.is_plateau else -1.0 / seg.slope
        # a piece contributes |x - alpha(u0)|^e / |x - alpha(u1)|^e
        if x == seg.top:
            order += e
        if x == seg.bottom:
            order -= e
    return order


def endpoint_limit(profile: Profile, tau: float, x: float) -> tuple[float, float]:
    """Limit of the curve at a parameter where ``I`` has a zero or pole of order ``E < 1``.

    There ``I'/I ~ E / (x' - x)`` and ``I'`` itself blows up, so ``X -> x`` and
    ``Y -> 0``: the curve touches the floor at ``(x, 0)``.
    """
    order = vanishing_order(profile, x)
    if order == 0 or order >= 1:
        raise SingularAtX(f"no floor contact at x={x} (order {order})")
    return float(x), 0.0


def tangent_line(profile: Profile, tau: float, x: float) -> tuple[float, float, float]:
    """Coefficients ``(A, B, C)`` of the line ``A Y + B X + C = 0``."""
    return x * integral_I(profile, x) / tau, 1.0, -x


# ---------------------------------------------------------------------------
# branches


@dataclass(frozen=True)
class CurveBranch:
    kind: str
    x_lo: float
    x_hi: float
    profile: Profile
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in BRANCH_KINDS:
            raise ValueError(f"unknown branch kind {self.kind!r}")

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.x_lo) and math.isfinite(self.x_hi)

    def point(self, tau: float, x: float) -> tuple[float, float]:
        return curve_point(self.profile, tau, x)

    def parameters(self, count: int) -> np.ndarray:
        """Monotone sweep of ``count`` parameters over the branch interval.

        A half-line is reached through ``x = x0 +- tan(theta)^2`` with theta on
        ``[0, pi/2)`` and a bounded interval through ``x = mid - half cos(theta)``
        on ``[0, pi]``.  Both crowd parameters near finite ends, where the
        curve typically meets the floor with a square-root profile.
        """
        if count < 2:
            raise ValueError("need at least two points per branch")
        if self.bounded:
            theta = np.linspace(0.0, math.pi, count)
            mid, half = (self.x_lo + self.x_hi) / 2, (self.x_hi - self.x_lo) / 2
            xs = mid - half * np.cos(theta)
            xs[0], xs[-1] = self.x_lo, self.x_hi
            return xs
        theta = np.linspace(0.0, math.pi / 2, count, endpoint=False)
        if math.isfinite(self.x_lo):
            return self.x_lo + np.tan(theta) ** 2
        if math.isfinite(self.x_hi):
            return self.x_hi - (np.tan(theta) ** 2)[::-1]
        raise ValueError("a branch must have at least one finite end")


def enumerate_branches(profile: Profile) -> list[CurveBranch]:
    """Branches of the arctic curve dictated by the shape of the profile.

    * first path on ``[alpha(0), inf)`` and first dual path on ``(-inf, 0]``;
    * last path on ``[0, alpha(U)]`` when ``alpha(U) > 0``;
    * last dual path on ``[alpha(L), alpha(0)]`` when the profile starts with
      a slope -1 piece on ``[0, L]``;
    * one empty-region freezing boundary ``[alpha(v+), alpha(v-)]`` per jump;
    * one vertical-region freezing boundary per later slope -1 piece, over its
      value range.

    The last-dual case is only derived for ``alpha(0) = 2U`` (longest part
    equal to the number of parts); other profiles get it with
    ``metadata["extrapolated"] = True``.  Freezing intervals that overlap
    another branch are reported in ``metadata["overlaps"]``.
    """
    profile.check_admissible()
    segs = profile.segments
    first, last = segs[0], segs[-1]
    out = [CurveBranch("first-path", first.top, math.inf, profile)]
    if last.bottom > profile.tol:
        out.append(CurveBranch("last-path", 0.0, last.bottom, profile))
    out.append(CurveBranch("first-dual", -math.inf, 0.0, profile))
    if first.is_plateau:
        domain = profile.domain_end
        extrapolated = abs(first.top - 2 * domain) > 1e-9
        out.append(
            CurveBranch("last-dual", first.bottom, first.top, profile, {"extrapolated": extrapolated})
        )
    for jump in profile.jumps():
        out.append(
            CurveBranch(
                "empty-freezing", jump.lower_value, jump.lower_value + jump.size, profile, {"u": jump.u}
            )
        )
    for seg in segs[1:]:
        if seg.is_plateau:
            out.append(
                CurveBranch("vertical-freezing", seg.bottom, seg.top, profile, {"u": seg.u_start})
            )
    _flag_overlaps(out)
    return out


def _flag_overlaps(branches: list[CurveBranch]) -> None:
    for k, b in enumerate(branches):
        hits = []
        for j, other in enumerate(branches):
            if j == k:
                continue
            lo, hi = max(b.x_lo, other.x_lo), min(b.x_hi, other.x_hi)
            if hi - lo > 1e-12:
                hits.append(other.kind)
        if hits:
            b.metadata["overlaps"] = hits


@dataclass
class Polyline:
    branch: CurveBranch
    xs: list[float]
    points: list[tuple[float, float]]
    skipped: int = 0


def sample_curve(profile: Profile, tau: float, points_per_branch: int = 200) -> list[Polyline]:
    """Evaluate every branch on a monotone sweep.

    Parameters where ``I`` has a zero or pole are replaced by their limit
    point on the floor when it exists and skipped otherwise.
    """
    if points_per_branch < 2:
        raise ValueError("points_per_branch must be at least 2")
    out = []
    for branch in enumerate_branches(profile):
        xs, pts, skipped = [], [], 0
        for x in branch.parameters(points_per_branch):
            try:
                X, Y = branch.point(tau, float(x))
            except SingularAtX:
                try:
                    X, Y = endpoint_limit(profile, tau, float(x))
                except SingularAtX:
                    skipped += 1
                    continue
            except (DegenerateDenominator, UndefinedAtX):
                skipped += 1
                continue
            if not (math.isfinite(X) and math.isfinite(Y)):
                skipped += 1
                continue
            xs.append(float(x))
            pts.append((X, Y))
        out.append(Polyline(branch, xs, pts, skipped))
    return out


# ---------------------------------------------------------------------------
# closed forms for the worked examples


def circle_residual(X: float, Y: float, tau: float) -> float:
    return (X - 1) ** 2 + ((2 * Y - tau) / tau) ** 2 - 1


def semicircle_residual(X: float, Y: float, tau: float) -> float:
    return (X - 1) ** 2 + (Y / tau) ** 2 - 1


def ellipse_residual(X: float, Y: float, tau: float, p: int) -> float:
    return (
        (X - p + 1) ** 2
        + (p * Y / tau - p + 1) ** 2
        + (2 * p - 4) / tau * X * Y
        - (p * p - 2 * p + 1)
    )


def staircase_p_residual(X: float, Y: float, tau: float, p: int) -> float:
    """Degree-p curve ``(p-1)^(p-1) (Y/tau)^p = X (p - X)^(p-1)`` for ``alpha = p(1-u)``.

    At ``p = 2`` this is the semicircle.
    """
    return (p - 1) ** (p - 1) * (Y / tau) ** p - X * (p - X) ** (p - 1)


def staircase_p_residual_degree_p_minus_1(X: float, Y: float, tau: float, p: int) -> float:
    """The variant ``((1-p) Y/tau)^(p-1) = X (X-p)^(p-1)``.

    It does not reduce to the semicircle at ``p = 2`` (it gives the parabola
    ``Y = tau X (2 - X)``) and is kept only so the discrepancy stays testable.
    """
    return ((1 - p) * Y / tau) ** (p - 1) - X * (X - p) ** (p - 1)


def staircase_p_parameterization(x: float, tau: float, p: int) -> tuple[float, float]:
    return x / (x - p + 1), tau * (x - p) / (x - p + 1) * (x / (x - p)) ** (1.0 / p)


def ellipse_parameterization(x: float, tau: float, p: int) -> tuple[float, float]:
    """Direct rational form for ``alpha = p - u``; numerator ``(x - p + 1)^2``."""
    q = x * x - 2 * (p - 1) * x + p * (p - 1)
    return x * x / q, tau * (x - p + 1) ** 2 / q


def cusp_empty_reference(x: float, tau: float) -> tuple[float, float]:
    """Rational/radical form for ``alpha = 4 - u`` on [0,1], ``4 - 2u`` on [1,2]."""
    cubic = x**3 - 7 * x**2 + 17 * x - 12
    X = x * (2 * x**2 - 9 * x + 12) / cubic
    Y = tau * x * (x - 3) ** 2 / cubic * math.sqrt((x - 2) / x)
    return X, Y


def cusp_vertical_reference(x: float, tau: float) -> tuple[float, float]:
    """Rational/radical form for ``alpha = 4 - 2u`` on [0,1], ``3 - u`` on [1,2].

    The radical is taken as the positive root; see :func:`cusp_vertical_sign`
    for the sign carried by the slope -1 piece.
    """
    cubic = x**3 - 5 * x**2 + 9 * x - 8
    X = x * x * (2 * x - 5) / cubic
    Y = tau * (x - 1) ** 2 / cubic * math.sqrt((x - 4) * (x - 2))
    return X, Y


def cusp_vertical_sign(x: float) -> float:
    """Sign of ``(x - 2)``: the factor the radical form drops for ``x < 2``."""
    return 1.0 if x > 2 else -1.0


def branch_summary(branches: list[CurveBranch]) -> list[dict]:
    return [
        {"kind": b.kind, "x_lo": b.x_lo, "x_hi": b.x_hi, **{k: v for k, v in b.metadata.items()}}
        for b in branches
    ]
