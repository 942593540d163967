from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lecture_hall.counting import enumerate_blht
from lecture_hall.errors import MalformedPathSystem
from lecture_hall.lattice import (
    DecoratedLattice,
    PathSystem,
    build_lh_graph,
    dimers_to_paths,
    dual_to_paths,
    height_function,
    parse_vertex_label,
    paths_to_dimers,
    paths_to_dual,
    paths_to_tableau,
    tableau_to_paths,
    validate_path_system,
    vertex_label,
)
from lecture_hall.model import LectureHallTableau, extremal_tableaux, make_partition

TAB_22 = LectureHallTableau(make_partition([2, 2]), 3, ((5, 6), (2, 3)))


def corners(path):
    """Drop intermediate points of vertical runs, in (col, y) coordinates."""
    pts = [(c, Fraction(m, c + 1)) for c, m in path]
    out = [pts[0]]
    for k in range(1, len(pts) - 1):
        a, b, c = pts[k - 1], pts[k], pts[k + 1]
        if not (a[0] == b[0] == c[0]):
            out.append(b)
    out.append(pts[-1])
    return out


def test_graph_sizes():
    g = build_lh_graph(2, 1)
    assert len(g.vertices()) == 6
    g = build_lh_graph(1, 0)
    assert len(g.vertices()) == 1 and g.edges() == []


def test_two_path_corners():
    ps = tableau_to_paths(TAB_22)
    # corners in (x, y) coordinates; path 1 is the upper one
    assert corners(ps.paths[1]) == [(0, 2), (1, 2), (1, Fraction(3, 2)), (2, Fraction(4, 3)), (2, 0)]
    assert corners(ps.paths[0]) == [(1, Fraction(5, 2)), (2, Fraction(7, 3)), (2, 2), (3, 2), (3, 0)]


def test_five_row_dual_shape():
    tab = LectureHallTableau(make_partition([4, 3, 1, 0, 0]), 4, ((16, 16, 9, 4), (12, 13, 6), (2,), (), ()))
    dual = paths_to_dual(tableau_to_paths(tab))
    assert dual.dual_shape.parts == (3, 2, 2, 1)
    assert dual.m == 4
    assert dual_to_paths(dual).paths == tableau_to_paths(tab).paths


def test_empty_shape_paths_are_drops():
    shape = make_partition([0, 0])
    ps = tableau_to_paths(extremal_tableaux(shape, 2)[0])
    for path in ps.paths:
        assert len({c for c, _ in path}) == 1
    assert paths_to_dual(ps).paths == ()


def test_single_box_dual_path():
    ps = tableau_to_paths(extremal_tableaux(make_partition([1]), 1)[0])
    assert paths_to_dual(ps).paths == (((0, 0), (1, 1)),)


def test_single_box_dimers_perfect():
    ps = tableau_to_paths(extremal_tableaux(make_partition([1]), 1)[0])
    config = paths_to_dimers(ps)
    assert config.is_perfect()
    assert dimers_to_paths(config).paths == ps.paths


def test_face_heights_two_by_two():
    hf = height_function(tableau_to_paths(TAB_22))
    assert hf.column(0) == [0, 0]
    assert hf.column(1) == [0, 0, 0, 1, 1]
    assert hf.column(2) == [1, 1, 1, 1, 1, 1, 2, 2]


def test_malformed_paths_rejected():
    ps = tableau_to_paths(TAB_22)
    broken = PathSystem(ps.shape, ps.t, (ps.paths[0][:-1], ps.paths[1]))
    with pytest.raises(MalformedPathSystem):
        validate_path_system(broken)


@pytest.mark.parametrize("v", [("w", 2, 5), ("B", 3), ("b", 0, 0)])
def test_vertex_labels_roundtrip(v):
    assert parse_vertex_label(vertex_label(v)) == v


shapes = st.lists(st.integers(0, 3), min_size=1, max_size=3).map(lambda xs: make_partition(sorted(xs, reverse=True)))


@given(shapes, st.integers(1, 3), st.data())
@settings(max_examples=40, deadline=None)
def test_bijections_on_random_tableaux(shape, t, data):
    tabs = list(enumerate_blht(shape, t))
    tab = data.draw(st.sampled_from(tabs))
    ps = tableau_to_paths(tab)
    validate_path_system(ps)
    assert paths_to_tableau(ps) == tab
    assert dual_to_paths(paths_to_dual(ps)).paths == ps.paths
    config = paths_to_dimers(ps)
    assert config.is_perfect()
    assert dimers_to_paths(config).paths == ps.paths


@given(shapes, st.integers(1, 3), st.data())
@settings(max_examples=30, deadline=None)
def test_height_steps_are_zero_or_one(shape, t, data):
    tab = data.draw(st.sampled_from(list(enumerate_blht(shape, t))))
    hf = height_function(tableau_to_paths(tab))
    for (c, k), h in hf.values.items():
        up = hf.values.get((c, k + 1))
        if up is not None:
            assert abs(h - up) <= 1


def test_decorated_lattice_balanced():
    lat = DecoratedLattice(make_partition([3, 2, 1]), 2)
    assert len(lat.whites()) == len(lat.blacks())
