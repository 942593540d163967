from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lecture_hall.cftp import (
    BLOCK,
    ChainState,
    RandomTape,
    allowed_range,
    cell_of_index,
    cftp_run,
    cftp_sample,
    check_valid,
    derive_seed,
    heat_bath_step,
    heat_bath_value,
    run_chain,
    sample_many,
    transition_matrix,
)
from lecture_hall.counting import enumerate_blht
from lecture_hall.errors import CellOutOfShape, NoCoalescence
from lecture_hall.model import LectureHallTableau, extremal_tableaux, is_valid_blht, make_partition

TAB_22 = LectureHallTableau(make_partition([2, 2]), 3, ((5, 6), (2, 3)))


def brute_range(tab, cell):
    ok = []
    for v in range(tab.t * (tab.n + tab.shape.largest) + 1):
        if is_valid_blht(tab.replace(cell, v).rows, tab.shape, tab.t):
            ok.append(v)
    return ok[0], ok[-1]


def test_allowed_range_examples():
    assert allowed_range(TAB_22, (1, 2)) == (5, 7)
    assert allowed_range(extremal_tableaux(make_partition([1]), 2)[0], (1, 1)) == (0, 1)
    assert allowed_range(extremal_tableaux(make_partition([2, 2]), 3)[1], (2, 2)) == (0, 4)


@pytest.mark.parametrize("cell", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_allowed_range_matches_substitution(cell):
    for tab in list(enumerate_blht(make_partition([2, 2]), 3))[::7]:
        assert allowed_range(tab, cell) == brute_range(tab, cell)


def test_cell_out_of_shape():
    with pytest.raises(CellOutOfShape):
        allowed_range(TAB_22, (3, 1))


def test_cell_numbering_row_major():
    shape = make_partition([3, 1])
    assert [cell_of_index(shape, k) for k in range(4)] == [(1, 1), (1, 2), (1, 3), (2, 1)]


def test_single_box_coalesces():
    lo, hi = extremal_tableaux(make_partition([1]), 2)
    nxt = heat_bath_step(ChainState(lo, hi), 0.0, 0.6)
    assert nxt.coalesced and nxt.lower.rows == ((1,),)


def test_min_value_step_preserves_order():
    lo, hi = extremal_tableaux(make_partition([2, 2]), 3)
    k = 2.5 / 4  # cell (2,1)
    nxt = heat_bath_step(ChainState(lo, hi), k, 0.0)
    assert nxt.lower[(2, 1)] == allowed_range(lo, (2, 1))[0]
    assert nxt.upper[(2, 1)] == allowed_range(hi, (2, 1))[0]
    assert nxt.lower.leq(nxt.upper)


def test_heat_bath_value_stays_in_range():
    assert heat_bath_value(2, 5, 0.999999) == 5
    assert heat_bath_value(2, 5, 0.0) == 2
    # (b - a + 1) * ell rounds up to 5.0 here
    assert heat_bath_value(1, 5, 0.9999999999999999) == 5


def test_tape_is_counter_based():
    tape = RandomTape(7)
    a = tape.draws(BLOCK - 2, BLOCK + 3)
    b = RandomTape(7).draws(1, BLOCK + 3)[BLOCK - 3 :]
    assert np.array_equal(a, b)
    assert ((a >= 0) & (a < 1)).all()
    assert not np.array_equal(RandomTape(8).draws(1, 4), RandomTape(7).draws(1, 4))


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(1, 2) == derive_seed(1, 2)
    assert len({derive_seed(1, i) for i in range(100)}) == 100


def test_empty_shape_sample():
    res = cftp_run(make_partition([0]), 3, 1)
    assert res.tableau.rows == ((),) and res.exact


def test_single_box_frequencies():
    draws = sample_many(make_partition([1]), 2, 5, 16000)
    freq = Counter(d.rows for d in draws)
    assert abs(freq[((1,),)] / 16000 - 0.5) < 0.013


def test_samples_are_valid_and_deterministic():
    shape = make_partition([3, 2, 2])
    a = sample_many(shape, 3, 42, 10)
    b = sample_many(shape, 3, 42, 10)
    assert a == b
    assert all(check_valid(s) for s in a)


def test_workers_do_not_change_results():
    shape = make_partition([2, 1])
    assert sample_many(shape, 2, 3, 12, workers=1) == sample_many(shape, 2, 3, 12, workers=2)


def test_no_coalescence_reported():
    with pytest.raises(NoCoalescence):
        cftp_run(make_partition([6] * 6), 6, 1, max_steps=16)


def test_approx_mode_flags_inexact():
    res = cftp_run(make_partition([4] * 4), 4, 1, mode="approx", close_gap=10**6)
    assert not res.exact and res.horizon == 1


@pytest.mark.slow
def test_square_24_smoke():
    shape = make_partition([24] * 24)
    assert all(check_valid(s) for s in sample_many(shape, 24, 1, 2))


def test_kernel_rows_sum_to_one():
    states = list(enumerate_blht(make_partition([2, 1]), 2))
    kernel = transition_matrix(states)
    assert all(sum(row) == 1 for row in kernel)
    # detailed balance for the uniform law means symmetry
    assert all(kernel[i][j] == kernel[j][i] for i in range(16) for j in range(16))


def test_run_chain_stays_valid():
    lo, _ = extremal_tableaux(make_partition([3, 3, 1]), 2)
    assert check_valid(run_chain(lo, 3, 5000))


@given(st.data(), st.floats(0, 1, exclude_max=True), st.floats(0, 1, exclude_max=True))
@settings(max_examples=200, deadline=None)
def test_monotone_coupling(data, k, ell):
    tabs = POOL
    a = data.draw(st.sampled_from(tabs))
    b = data.draw(st.sampled_from(tabs))
    lo = LectureHallTableau(a.shape, a.t, tuple(tuple(map(min, x, y)) for x, y in zip(a.rows, b.rows)))
    hi = LectureHallTableau(a.shape, a.t, tuple(tuple(map(max, x, y)) for x, y in zip(a.rows, b.rows)))
    nxt = heat_bath_step(ChainState(lo, hi), k, ell)
    assert nxt.lower.leq(nxt.upper)
    assert check_valid(nxt.lower) and check_valid(nxt.upper)


POOL = list(enumerate_blht(make_partition([2, 2, 1]), 2))
