import json

import pytest
from hypothesis import given, settings, strategies as st

from lecture_hall.errors import InadmissibleProfile, NotWeaklyDecreasing, NegativePart, InvalidTableau
from lecture_hall.model import (
    LectureHallTableau,
    Profile,
    builtin_profile,
    conjugate,
    denominator,
    extremal_tableaux,
    is_valid_blht,
    make_partition,
    parse_partition,
    profile_from_partition,
)


def test_partition_keeps_trailing_zeros():
    p = make_partition([4, 3, 1, 0, 0])
    assert p.n == 5 and p.size == 8


def test_zero_partition():
    p = make_partition([0])
    assert p.n == 1 and p.size == 0


@pytest.mark.parametrize("parts, err", [([1, 2], NotWeaklyDecreasing), ([1, -1], NegativePart)])
def test_partition_rejects(parts, err):
    with pytest.raises(err):
        make_partition(parts)


def test_parse_partition():
    assert parse_partition("3, 2,2").parts == (3, 2, 2)


@pytest.mark.parametrize(
    "parts, m, expected",
    [([4, 3, 1, 0, 0], 4, (3, 2, 2, 1)), ([0, 0], 1, (0,)), ([2, 2], 2, (2, 2))],
)
def test_conjugate(parts, m, expected):
    assert conjugate(make_partition(parts), m).parts == expected


def test_denominator():
    assert denominator(2, 1, 2) == 3


@pytest.mark.parametrize(
    "parts, t, rows, ok",
    [
        ([2, 2], 3, [[5, 6], [2, 3]], True),
        ([4, 3, 1, 0, 0], 4, [[16, 16, 9, 4], [12, 13, 6], [2], [], []], True),
        ([2, 2], 3, [[5, 6], [2, 4]], False),
    ],
)
def test_validity_examples(parts, t, rows, ok):
    assert is_valid_blht(rows, make_partition(parts), t) is ok


def test_extremal_examples():
    lo, hi = extremal_tableaux(make_partition([2, 2]), 3)
    assert lo.rows == ((1, 1), (0, 0))
    assert hi.rows == ((5, 7), (2, 4))
    lo, hi = extremal_tableaux(make_partition([1]), 2)
    assert (lo.rows, hi.rows) == (((0,),), ((1,),))
    lo, hi = extremal_tableaux(make_partition([0]), 5)
    assert lo.rows == hi.rows == ((),)


partitions = st.lists(st.integers(0, 5), min_size=1, max_size=5).map(lambda xs: make_partition(sorted(xs, reverse=True)))


@given(partitions, st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_extremal_tableaux_are_valid_and_ordered(shape, t):
    lo, hi = extremal_tableaux(shape, t)
    assert is_valid_blht(lo.rows, shape, t)
    assert is_valid_blht(hi.rows, shape, t)
    assert lo.leq(hi)


def test_tableau_json_roundtrip():
    tab = LectureHallTableau(make_partition([2, 2]), 3, ((5, 6), (2, 3)))
    doc = json.loads(tab.to_json())
    assert doc["rows"] == [[5, 6], [2, 3]]
    assert LectureHallTableau.from_json(tab.to_json()) == tab


def test_validated_rejects_bad_rows():
    with pytest.raises(InvalidTableau):
        LectureHallTableau(make_partition([2, 2]), 3, ((5, 6), (2, 4))).validated()


@pytest.mark.parametrize(
    "parts_fn, top, slope",
    [(lambda n: [n] * n, 2.0, -1.0), (lambda n: list(range(n, 0, -1)), 2.0, -2.0)],
)
def test_profile_from_standard_shapes(parts_fn, top, slope):
    prof = profile_from_partition(make_partition(parts_fn(40)))
    assert len(prof.segments) == 1
    seg = prof.segments[0]
    assert seg.top == pytest.approx(top, abs=0.06)
    assert seg.slope == pytest.approx(slope, abs=0.06)


def test_cusp_profile_has_one_jump():
    n = 30
    parts = [2 * n] * n + list(range(n, 0, -1))
    prof = profile_from_partition(make_partition(parts), scale=n)
    jumps = prof.jumps()
    assert len(jumps) == 1
    assert jumps[0].size == pytest.approx(1.0, abs=0.1)
    assert jumps[0].u == pytest.approx(1.0, abs=0.05)


def test_builtin_cusp_matches_description():
    prof = builtin_profile("cusp-empty")
    assert prof.value(0) == 4 and prof.value(1) == 3
    assert prof.value_right(1) == 2
    assert [j.size for j in prof.jumps()] == [1]


def test_inadmissible_profile():
    with pytest.raises(InadmissibleProfile):
        Profile.from_list([[0, 1, 1, 0]]).check_admissible()
