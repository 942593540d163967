from fractions import Fraction

import numpy as np
import pytest

from lecture_hall.counting import count_blht, enumerate_blht
from lecture_hall.dimer import (
    InverseKasteleyn,
    all_edge_probabilities,
    closed_form_inverse_single_row,
    coordinate_vertex,
    edge_probability,
    exact_inverse,
    faces_are_kasteleyn,
    float_inverse,
    kasteleyn_determinant,
    kasteleyn_matrix,
    single_row_identity_defects,
)
from lecture_hall.errors import CoordinateOutOfRange
from lecture_hall.lattice import DecoratedLattice, paths_to_dimers, tableau_to_paths
from lecture_hall.model import make_partition


@pytest.mark.parametrize("parts, t, expected", [([0], 1, 1), ([2, 2], 3, 81), ([1], 2, 2), ([3, 1, 0], 2, None)])
def test_determinant_counts_tableaux(parts, t, expected):
    shape = make_partition(parts)
    det = abs(kasteleyn_determinant(kasteleyn_matrix(shape, t)))
    assert det == (expected if expected is not None else count_blht(shape, t))


@pytest.mark.parametrize("parts, t", [([2, 2], 3), ([3, 2, 1], 2), ([2, 0, 0], 3)])
def test_faces_have_kasteleyn_signs(parts, t):
    assert faces_are_kasteleyn(make_partition(parts), t)


def test_exact_and_float_inverse_agree():
    K = kasteleyn_matrix(make_partition([2, 1]), 2)
    exact = np.array([[float(v) for v in row] for row in exact_inverse(K)])
    assert np.allclose(exact, float_inverse(K))


def test_single_box_edge_probability_by_enumeration():
    shape, t = make_partition([1]), 2
    K = kasteleyn_matrix(shape, t)
    configs = [paths_to_dimers(tableau_to_paths(tab)).matching for tab in enumerate_blht(shape, t)]
    for edge in DecoratedLattice(shape, t).edges():
        expected = Fraction(sum(edge in c for c in configs), len(configs))
        assert edge_probability(K, [edge]) == expected


def test_edge_probabilities_match_enumeration():
    shape, t = make_partition([2, 2]), 3
    configs = [paths_to_dimers(tableau_to_paths(tab)).matching for tab in enumerate_blht(shape, t)]
    probs = all_edge_probabilities(shape, t)
    for edge, p in probs.items():
        assert p == Fraction(sum(edge in c for c in configs), len(configs))


def test_pair_probability_matches_enumeration():
    shape, t = make_partition([2, 1]), 2
    K = kasteleyn_matrix(shape, t)
    inv = InverseKasteleyn(K)
    configs = [paths_to_dimers(tableau_to_paths(tab)).matching for tab in enumerate_blht(shape, t)]
    edges = sorted(configs[3])[:2]
    expected = Fraction(sum(all(e in c for e in edges) for c in configs), len(configs))
    assert edge_probability(K, edges, inv) == expected


def test_forced_edge_probability_one():
    shape, t = make_partition([0]), 1
    K = kasteleyn_matrix(shape, t)
    (config,) = [paths_to_dimers(tableau_to_paths(tab)).matching for tab in enumerate_blht(shape, t)]
    for edge in config:
        assert edge_probability(K, [edge]) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("kappa", [1, 2])
def test_single_row_inverse_identity(n, kappa):
    assert single_row_identity_defects(n, kappa) == 0


def test_coordinate_vertex():
    assert coordinate_vertex(2, Fraction(4, 3)) == (2, 4)
    with pytest.raises(CoordinateOutOfRange):
        coordinate_vertex(2, Fraction(1, 2))
