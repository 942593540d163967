"""Exact uniform sampling by monotone coupling from the past.

The chain resamples one cell at a time: a cell is picked from the row-major
numbering with the first uniform ``k`` and set to a uniform value of its
allowed range with the second uniform ``l``, via ``floor(a + (b - a + 1) l)``.
That update is monotone in both ends of the range, so the coupled chains
started from the cellwise minimum and maximum tableaux sandwich every other
trajectory.

Randomness for the step at time ``-s`` depends only on ``(seed, s)``.  Steps
are grouped in blocks of :data:`BLOCK` and each block is drawn from a Philox
generator keyed by the seed with the block number as counter, so extending
the horizon never changes the draws already used.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .errors import CellOutOfShape, NoCoalescence
from .model import LectureHallTableau, Partition, extremal_tableaux, is_valid_blht

BLOCK = 1 << 16
DEFAULT_MAX_STEPS = 1 << 30
SEED_MASK = (1 << 64) - 1


# ---------------------------------------------------------------------------
# random tape


@dataclass(frozen=True)
class RandomTape:
    """Counter-indexed source of ``(k, l)`` pairs in ``[0, 1)``."""

    seed: int

    def block(self, index: int, rows: int = BLOCK) -> np.ndarray:
        """First ``rows`` rows of block ``index`` (a prefix of the same stream)."""
        gen = np.random.Generator(np.random.Philox(key=self.seed & SEED_MASK, counter=index))
        return gen.random((rows, 2))

    def draws(self, first: int, last: int) -> np.ndarray:
        """Rows for steps ``first..last`` inclusive (1-based step indices)."""
        out = np.empty((last - first + 1, 2))
        pos = 0
        step = first
        while step <= last:
            b, offset = divmod(step - 1, BLOCK)
            take = min(BLOCK - offset, last - step + 1)
            out[pos : pos + take] = self.block(b, offset + take)[offset:]
            pos += take
            step += take
        return out

    def pair(self, step: int) -> tuple[float, float]:
        k, l = self.draws(step, step)[0]
        return float(k), float(l)


def derive_seed(seed: int, index: int) -> int:
    """Per-sample seed; a hash so that nearby indices give unrelated keys."""
    digest = hashlib.blake2b(f"{seed & SEED_MASK}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


# ---------------------------------------------------------------------------
# array kernels


@numba.njit(cache=True, inline="always")
def _range(grid, lengths, n, t, r, c):
    # all operands are nonnegative on valid states, so // is plain floor division
    d = n - r + c
    lo = 0
    hi = t * d - 1
    if r + 1 < n and c < lengths[r + 1]:
        lo = max(lo, grid[r + 1, c] * d // (d - 1) + 1)
    if c + 1 < lengths[r]:
        lo = max(lo, (grid[r, c + 1] * d + d) // (d + 1))
    if c > 0:
        hi = min(hi, grid[r, c - 1] * d // (d - 1))
    if r > 0:
        hi = min(hi, (grid[r - 1, c] * d - 1) // (d + 1))
    return lo, hi


@numba.njit(cache=True)
def _allowed_range(grid, lengths, n, t, r, c):
    return _range(grid, lengths, n, t, r, c)


@numba.njit(cache=True)
def _run_coupled(lower, upper, lengths, n, t, cell_r, cell_c, draws):
    """Apply the draws in order to both grids (the caller orders them oldest first)."""
    ncells = cell_r.shape[0]
    for s in range(draws.shape[0]):
        idx = int(draws[s, 0] * ncells)
        if idx >= ncells:
            idx = ncells - 1
        r = cell_r[idx]
        c = cell_c[idx]
        ell = draws[s, 1]
        lo, hi = _range(lower, lengths, n, t, r, c)
        lower[r, c] = min(hi, lo + np.int64((hi - lo + 1) * ell))
        lo, hi = _range(upper, lengths, n, t, r, c)
        upper[r, c] = min(hi, lo + np.int64((hi - lo + 1) * ell))


@numba.njit(cache=True)
def _run_single(grid, lengths, n, t, cell_r, cell_c, draws):
    ncells = cell_r.shape[0]
    for s in range(draws.shape[0]):
        idx = int(draws[s, 0] * ncells)
        if idx >= ncells:
            idx = ncells - 1
        r = cell_r[idx]
        c = cell_c[idx]
        lo, hi = _range(grid, lengths, n, t, r, c)
        grid[r, c] = min(hi, lo + np.int64((hi - lo + 1) * draws[s, 1]))


@numba.njit(cache=True)
def _max_gap(lower, upper, cell_r, cell_c):
    gap = 0
    for idx in range(cell_r.shape[0]):
        g = upper[cell_r[idx], cell_c[idx]] - lower[cell_r[idx], cell_c[idx]]
        if g > gap:
            gap = g
    return gap


# ---------------------------------------------------------------------------
# conversions


@dataclass(frozen=True)
class Layout:
    """Array view of a shape: row lengths plus the row-major cell numbering."""

    shape: Partition
    t: int

    @property
    def lengths(self) -> np.ndarray:
        return np.array(self.shape.parts, dtype=np.int64)

    @property
    def cell_rows(self) -> np.ndarray:
        return np.array([i - 1 for i, _ in self.shape.cells()], dtype=np.int64)

    @property
    def cell_cols(self) -> np.ndarray:
        return np.array([j - 1 for _, j in self.shape.cells()], dtype=np.int64)

    def to_grid(self, tableau: LectureHallTableau) -> np.ndarray:
        grid = np.zeros((self.shape.n, max(self.shape.largest, 1)), dtype=np.int64)
        for r, row in enumerate(tableau.rows):
            grid[r, : len(row)] = row
        return grid

    def from_grid(self, grid: np.ndarray) -> LectureHallTableau:
        rows = tuple(tuple(int(v) for v in grid[r, :length]) for r, length in enumerate(self.shape.parts))
        return LectureHallTableau(self.shape, self.t, rows)


def cell_of_index(shape: Partition, index: int) -> tuple[int, int]:
    """1-indexed cell carrying row-major number ``index`` (0-based)."""
    for k, cell in enumerate(shape.cells()):
        if k == index:
            return cell
    raise CellOutOfShape(f"index {index} outside a shape with {shape.size} cells")


# ---------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class ChainState:
    lower: LectureHallTableau
    upper: LectureHallTableau

    @property
    def coalesced(self) -> bool:
        return self.lower.rows == self.upper.rows


def allowed_range(tableau: LectureHallTableau, cell: tuple[int, int]) -> tuple[int, int]:
    """Values the cell may take with every other cell fixed, as ``(a, b)``."""
    i, j = cell
    if not (1 <= i <= tableau.n and 1 <= j <= tableau.shape.part(i)):
        raise CellOutOfShape(f"cell {cell} is not in shape {tableau.shape}")
    layout = Layout(tableau.shape, tableau.t)
    lo, hi = _allowed_range(
        layout.to_grid(tableau), layout.lengths, tableau.n, tableau.t, i - 1, j - 1
    )
    return int(lo), int(hi)


def heat_bath_value(a: int, b: int, ell: float) -> int:
    # ell just below 1 can round (b - a + 1) * ell up to b - a + 1
    return min(b, int(np.floor(a + (b - a + 1) * ell)))


def heat_bath_step(state: ChainState, k: float, ell: float) -> ChainState:
    """Resample the cell numbered ``floor(k |lambda|)`` in both tableaux with the same ``ell``."""
    if not (0 <= k < 1 and 0 <= ell < 1):
        raise ValueError("k and ell must lie in [0, 1)")
    shape = state.lower.shape
    if shape.size == 0:
        return state
    cell = cell_of_index(shape, min(shape.size - 1, int(k * shape.size)))
    out = []
    for tab in (state.lower, state.upper):
        a, b = allowed_range(tab, cell)
        out.append(tab.replace(cell, heat_bath_value(a, b, ell)))
    return ChainState(*out)


@dataclass
class CftpResult:
    tableau: LectureHallTableau
    horizon: int
    exact: bool


def cftp_run(
    shape: Partition,
    t: int,
    seed: int,
    max_steps: int = DEFAULT_MAX_STEPS,
    mode: str = "exact",
    close_gap: int = 0,
    start_horizon: int = 1,
) -> CftpResult:
    """Coupling from the past with doubling horizons.

    In ``exact`` mode the chains from the extremal tableaux are run from time
    ``-T`` to 0 and the common state is returned once they agree.  In
    ``approx`` mode the run stops as soon as the largest cellwise gap at time
    0 is at most ``close_gap`` and the lower state is returned; this is not an
    exact sampler.
    """
    if mode not in ("exact", "approx"):
        raise ValueError(f"unknown mode {mode!r}")
    low, high = extremal_tableaux(shape, t)
    if shape.size == 0:
        return CftpResult(low, 0, True)
    layout = Layout(shape, t)
    lengths, cell_r, cell_c = layout.lengths, layout.cell_rows, layout.cell_cols
    tape = RandomTape(seed)
    horizon = max(1, start_horizon)
    target_gap = 0 if mode == "exact" else close_gap
    while horizon <= max_steps:
        lower, upper = layout.to_grid(low), layout.to_grid(high)
        # walk forward from -horizon: steps horizon, horizon-1, ..., 1
        last = horizon
        while last >= 1:
            first = max(1, ((last - 1) // BLOCK) * BLOCK + 1)
            draws = tape.draws(first, last)[::-1].copy()
            _run_coupled(lower, upper, lengths, shape.n, t, cell_r, cell_c, draws)
            last = first - 1
        if _max_gap(lower, upper, cell_r, cell_c) <= target_gap:
            return CftpResult(layout.from_grid(lower), horizon, mode == "exact")
        horizon *= 2
    raise NoCoalescence(f"no coalescence within {max_steps} steps for {shape}, t={t}")


def cftp_sample(shape: Partition, t: int, seed: int, **kwargs) -> LectureHallTableau:
    return cftp_run(shape, t, seed, **kwargs).tableau


def _sample_one(args):
    shape, t, seed, index, kwargs = args
    return cftp_sample(shape, t, derive_seed(seed, index), **kwargs)


def sample_many(
    shape: Partition, t: int, seed: int, count: int, workers: int = 1, **kwargs
) -> list[LectureHallTableau]:
    """Independent samples; sample ``i`` always uses ``derive_seed(seed, i)``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    jobs = [(shape, t, seed, i, kwargs) for i in range(count)]
    if workers <= 1:
        return [_sample_one(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sample_one, jobs))


def run_chain(tableau: LectureHallTableau, seed: int, steps: int) -> LectureHallTableau:
    """Forward single-chain run from a given state (useful for mixing experiments)."""
    layout = Layout(tableau.shape, tableau.t)
    grid = layout.to_grid(tableau)
    if tableau.shape.size and steps:
        draws = RandomTape(seed).draws(1, steps)
        _run_single(
            grid, layout.lengths, tableau.n, tableau.t, layout.cell_rows, layout.cell_cols, draws
        )
    return layout.from_grid(grid)


def transition_matrix(states: list[LectureHallTableau]) -> list[list]:
    """Exact single-step kernel of the heat-bath chain over the listed states.

    Entry ``[x, y]`` is the probability to move from state ``x`` to ``y``:
    each cell is chosen with probability ``1/|lambda|`` and then each value
    of its allowed range with probability ``1/(b - a + 1)``.
    """
    from fractions import Fraction

    index = {s.rows: k for k, s in enumerate(states)}
    size = len(states)
    shape = states[0].shape
    ncells = shape.size
    kernel = [[Fraction(0)] * size for _ in range(size)]
    for x, state in enumerate(states):
        if ncells == 0:
            kernel[x][x] = Fraction(1)
            continue
        for cell in shape.cells():
            a, b = allowed_range(state, cell)
            for v in range(a, b + 1):
                y = index[state.replace(cell, v).rows]
                kernel[x][y] += Fraction(1, ncells * (b - a + 1))
    return kernel


def check_valid(tableau: LectureHallTableau) -> bool:
    return is_valid_blht(tableau.rows, tableau.shape, tableau.t)
