import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from lecture_hall.counting import (
    bareiss_determinant,
    count_blht,
    count_via_lgv,
    enumerate_blht,
    path_count_between,
    single_path_count,
    single_path_decomposition,
    verify_single_path_decomposition,
)
from lecture_hall.errors import SearchSpaceTooLarge
from lecture_hall.model import is_valid_blht, make_partition


@pytest.mark.parametrize(
    "parts, t, expected",
    [([2, 2], 3, 81), ([2, 1], 2, 16), ([1], 2, 2), ([0], 4, 1), ([0, 0, 0], 2, 1)],
)
def test_count_examples(parts, t, expected):
    shape = make_partition(parts)
    assert count_blht(shape, t) == expected
    assert count_via_lgv(shape, t) == expected
    assert sum(1 for _ in enumerate_blht(shape, t)) == expected


def test_five_row_shape_cross_oracle():
    shape = make_partition([4, 3, 1, 0, 0])
    assert count_via_lgv(shape, 4) == count_blht(shape, 4)


def test_brute_force_matches_enumeration():
    shape, t = make_partition([2, 1]), 3
    cells = list(shape.cells())
    brute = 0
    for values in itertools.product(range(t * 4), repeat=len(cells)):
        rows = [[0] * p for p in shape.parts]
        for (i, j), v in zip(cells, values):
            rows[i - 1][j - 1] = v
        brute += is_valid_blht(rows, shape, t)
    assert brute == count_blht(shape, t)


def test_enumeration_is_sorted_and_valid():
    shape = make_partition([2, 2])
    tabs = list(enumerate_blht(shape, 2))
    flats = [t.flat() for t in tabs]
    assert flats == sorted(flats)
    assert len(set(flats)) == len(flats)


def test_enumeration_cap():
    with pytest.raises(SearchSpaceTooLarge):
        list(enumerate_blht(make_partition([3, 3, 3]), 3, cap=10))


@pytest.mark.parametrize("a, b, c, d, expected", [(0, 2, 0, 2, 1), (0, 2, 2, 0, 4)])
def test_path_count_between(a, b, c, d, expected):
    assert path_count_between(a, b, c, d) == expected


@given(st.integers(0, 6), st.integers(1, 5))
def test_single_row_power(k, t):
    assert path_count_between(0, t, k, 0) == t**k


@pytest.mark.parametrize("n, k, t, expected", [(1, 0, 3, 1), (1, 1, 2, 2), (2, 2, 3, comb(3, 2) * 9)])
def test_single_path_count(n, k, t, expected):
    assert single_path_count(n, k, t) == expected


@pytest.mark.parametrize("n, k, t, s", [(1, 1, 2, 1), (3, 5, 7, 2), (4, 0, 3, 1)])
def test_decomposition_examples(n, k, t, s):
    assert verify_single_path_decomposition(n, k, t, s)


def test_decomposition_small_case_by_hand():
    lhs, rhs = single_path_decomposition(1, 1, 2, 1)
    assert lhs == rhs == 2


@given(
    st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=4, max_size=4),
    st.permutations(range(4)),
)
@settings(max_examples=80)
def test_bareiss_matches_permutation_expansion(m, perm):
    def leibniz(a):
        total = 0
        for p in itertools.permutations(range(len(a))):
            sign = 1
            for i in range(len(p)):
                for j in range(i + 1, len(p)):
                    if p[i] > p[j]:
                        sign = -sign
            prod = 1
            for i, j in enumerate(p):
                prod *= a[i][j]
            total += sign * prod
        return total

    det = bareiss_determinant(m)
    assert det == leibniz(m)
    permuted = [m[i] for i in perm]
    assert abs(bareiss_determinant(permuted)) == abs(det)
