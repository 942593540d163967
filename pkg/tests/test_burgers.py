import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lecture_hall.arctic import sample_curve
from lecture_hall.burgers import (
    burgers_residual,
    burgers_solution,
    characteristic_residual,
    conjecture_height_check,
    discriminant,
    hausdorff_distance,
    is_liquid,
    liquid_grid,
    locus_polylines,
)
from lecture_hall.errors import DomainBoundary
from lecture_hall.model import builtin_profile


def test_staircase_discriminant_example():
    assert discriminant("staircase", 1.0, 0.5) == pytest.approx(-0.75)
    assert burgers_solution("staircase", 1.0, 0.5).imag != 0


@pytest.mark.parametrize("x", [0.3, 1.0, 1.7])
def test_square_locus_gives_real_root(x):
    # (x-1)^2 - 4y + 4y^2 = 0, lower root
    y = (1 - math.sqrt(1 - (x - 1) ** 2)) / 2
    assert abs(discriminant("square", x, y)) < 1e-12


def test_staircase_boundary_point():
    assert abs(discriminant("staircase", 2.0 - 1e-9, 1e-3)) < 1e-2


@pytest.mark.parametrize("x, y", [(2.5, 0.5), (1.0, 0.0), (1.0, 1.0)])
def test_domain_boundary(x, y):
    with pytest.raises(DomainBoundary):
        burgers_solution("square", x, y)


@pytest.mark.parametrize("example, p", [("staircase", 2), ("square", 2), ("square-p", 3)])
def test_residual_on_grid(example, p):
    pts = liquid_grid(example, 12, p)
    assert pts
    assert max(burgers_residual(example, x, y, p=p) for x, y in pts) < 1e-6
    assert max(characteristic_residual(example, x, y, p=p) for x, y in pts) < 1e-9


@given(st.floats(0.05, 1.95), st.floats(0.05, 0.95))
@settings(max_examples=60, deadline=None)
def test_liquid_points_have_complex_solution(x, y):
    if is_liquid("staircase", x, y):
        assert burgers_solution("staircase", x, y).imag != 0


@pytest.mark.parametrize("example", ["staircase", "square"])
def test_locus_close_to_curve(example):
    arc = [np.asarray(pl.points) for pl in sample_curve(builtin_profile(example), 1.0, 4000) if pl.points]
    assert hausdorff_distance(arc, locus_polylines(example, 1000)) < 1e-5


def test_height_report_is_exploratory():
    report = conjecture_height_check([], "staircase")
    assert report.to_dict()["samples"] == 0
