import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lecture_hall.arctic import (
    circle_residual,
    curve_point,
    ellipse_parameterization,
    endpoint_limit,
    enumerate_branches,
    integral_I,
    integral_I_prime,
    integral_I_quadrature,
    sample_curve,
    semicircle_residual,
    staircase_p_parameterization,
    staircase_p_residual,
    tangent_line,
)
from lecture_hall.errors import SingularAtX, UndefinedAtX
from lecture_hall.model import Profile, builtin_profile

SQUARE = builtin_profile("square")
STAIR = builtin_profile("staircase")
CUSP = builtin_profile("cusp-empty")


@pytest.mark.parametrize(
    "profile, x, value, deriv",
    [(SQUARE, 3.0, 0.5, 0.25), (STAIR, 4.0, math.sqrt(0.5), math.sqrt(2) / 16)],
)
def test_integral_values(profile, x, value, deriv):
    assert integral_I(profile, x) == pytest.approx(value, rel=1e-14)
    assert integral_I_prime(profile, x) == pytest.approx(deriv, rel=1e-14)


def test_principal_value_region():
    assert integral_I(CUSP, 2.5) == pytest.approx(3 * math.sqrt(0.2), rel=1e-12)
    assert integral_I_quadrature(CUSP, 2.5) == pytest.approx(3 * math.sqrt(0.2), abs=1e-8)


@pytest.mark.parametrize("x", [-3.0, -0.5, 4.5, 7.0, 30.0])
def test_quadrature_agrees_off_range(x):
    assert integral_I_quadrature(CUSP, x) == pytest.approx(abs(integral_I(CUSP, x)), rel=1e-8)


@given(st.floats(2.05, 50))
@settings(max_examples=50)
def test_derivative_matches_finite_difference(x):
    h = 1e-5 * x
    fd = (integral_I(STAIR, x + h) - integral_I(STAIR, x - h)) / (2 * h)
    assert integral_I_prime(STAIR, x) == pytest.approx(fd, rel=1e-6, abs=1e-12)


def test_derivative_decays():
    assert abs(integral_I_prime(SQUARE, 1e6)) < 1e-5


def test_undefined_inside_non_plateau_range():
    with pytest.raises(UndefinedAtX):
        integral_I(STAIR, 1.0)


def test_singular_at_endpoint():
    with pytest.raises(SingularAtX):
        integral_I(SQUARE, 1.0)


def test_curve_point_examples():
    X, Y = curve_point(SQUARE, 1.0, 2.0)
    assert (X, Y) == pytest.approx((2.0, 0.5))
    X, Y = curve_point(STAIR, 1.0, 4.0)
    assert (X, Y) == pytest.approx((4 / 3, 2 * math.sqrt(2) / 3), rel=1e-12)
    assert abs(semicircle_residual(X, Y, 1.0)) < 1e-12


def test_large_x_limit_of_square_p():
    X, _ = curve_point(builtin_profile("square-p", 3), 1.0, 1e7)
    assert X == pytest.approx(ellipse_parameterization(1e7, 1.0, 3)[0], rel=1e-9)
    assert X == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize("p, x", [(3, 5.0), (4, 9.0)])
def test_staircase_p_parameterization(p, x):
    X, Y = curve_point(builtin_profile("staircase-p", p), 2.0, x)
    assert (X, Y) == pytest.approx(staircase_p_parameterization(x, 2.0, p), rel=1e-12)
    assert abs(staircase_p_residual(X, Y, 2.0, p)) < 1e-9


def test_tangent_lines():
    a, b, c = tangent_line(SQUARE, 1.0, 2.0)
    assert a == 0  # vertical line X = 2 touching at (2, 1/2)
    assert b * 2.0 + c == 0
    X, Y = curve_point(STAIR, 1.0, 4.0)
    a, b, c = tangent_line(STAIR, 1.0, 4.0)
    assert abs(a * Y + b * X + c) < 1e-12


@given(st.floats(2.1, 40), st.floats(0.5, 3))
@settings(max_examples=40)
def test_points_lie_on_their_tangent_lines(x, tau):
    X, Y = curve_point(SQUARE, tau, x)
    a, b, c = tangent_line(SQUARE, tau, x)
    assert abs(a * Y + b * X + c) < 1e-9 * max(1.0, x)


def test_branch_covers_real_line_for_square():
    kinds = {b.kind: (b.x_lo, b.x_hi) for b in enumerate_branches(SQUARE)}
    assert kinds["first-dual"] == (-math.inf, 0.0)
    assert kinds["last-path"] == (0.0, 1.0)
    assert kinds["last-dual"] == (1.0, 2.0)
    assert kinds["first-path"] == (2.0, math.inf)


def test_staircase_has_two_branches():
    assert sorted(b.kind for b in enumerate_branches(STAIR)) == ["first-dual", "first-path"]


def test_cusp_adds_empty_freezing():
    freezing = [b for b in enumerate_branches(CUSP) if b.kind == "empty-freezing"]
    assert [(b.x_lo, b.x_hi) for b in freezing] == [(2, 3)]


def test_floor_contact():
    assert endpoint_limit(STAIR, 1.0, 2.0) == (2.0, 0.0)
    with pytest.raises(SingularAtX):
        endpoint_limit(SQUARE, 1.0, 5.0)


@pytest.mark.parametrize("tau", [1.0, 4.0])
def test_sampled_circle(tau):
    pts = [p for pl in sample_curve(SQUARE, tau, 300) for p in pl.points]
    assert max(abs(circle_residual(X, Y, tau)) for X, Y in pts) < 1e-9


@pytest.mark.parametrize("name", ["square", "staircase", "cusp-empty", "cusp-vertical"])
def test_sampled_points_inside_strip(name):
    for pl in sample_curve(builtin_profile(name), 1.0, 200):
        ys = np.array([p[1] for p in pl.points])
        assert ((ys >= -1e-12) & (ys <= 1 + 1e-12)).all()


def test_custom_profile_runs():
    prof = Profile.from_list([[0, 0.5, -1, 3], [0.5, 1, -3, 4]])
    prof.check_admissible()
    assert sum(len(pl.points) for pl in sample_curve(prof, 1.0, 50)) > 0
