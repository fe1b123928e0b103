"""Best piecewise-constant simplification with at most k segments.

Given a step function with t segments and a budget k, find the k-segment
step function (on the same domain, breakpoints chosen among the input's)
minimizing the sup-norm error.  Solved by dynamic programming over block
partitions in O(k t^2): the optimal approximant is constant on contiguous
blocks of input segments, and on a block the best constant is the midpoint
of the block's value range.

Two combination rules are provided.  The default, ``combine="max"``, takes
the maximum of per-block errors and therefore reports the true sup-norm
error of the returned approximant.  ``combine="sum"`` adds per-block
errors instead; it is a looser objective kept for comparison, and its
reported error is an upper bound on the sup-norm error, not the error
itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .piecewise import PiecewiseConstant

__all__ = ["FitResult", "range_tables", "fit", "fit_error_profile", "brute_force_fit"]

_BRUTE_FORCE_MAX_T = 20


@dataclass(frozen=True)
class FitResult:
    """Outcome of a fit: objective value, the approximant, and the chosen blocks.

    ``splits`` lists the 0-based index of the first input segment of each
    block, so it always starts with 0 and has one entry per block before
    canonical merging.  For ``combine="max"`` (the default), ``error``
    equals ``linf_distance(input, approximant)`` exactly.
    """

    error: float
    approximant: PiecewiseConstant
    splits: tuple[int, ...]


def range_tables(values) -> tuple[np.ndarray, np.ndarray]:
    """Running max/min tables: u[a, b] = max(values[a..b]), l[a, b] = min.

    Entries below the diagonal (a > b) are unspecified; they are zeroed so
    whole-matrix arithmetic on the tables stays finite.  O(t^2) time and
    space.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("values must be a nonempty 1-d sequence")
    t = vals.size
    u = np.zeros((t, t), dtype=np.float64)
    l = np.zeros((t, t), dtype=np.float64)
    for a in range(t):
        u[a, a:] = np.maximum.accumulate(vals[a:])
        l[a, a:] = np.minimum.accumulate(vals[a:])
    return u, l


def _cost_tables(f: PiecewiseConstant, combine: str) -> np.ndarray:
    """Per-block cost matrix, transposed so column slices are contiguous.

    Returns H with H[end, start] = cost of approximating input segments
    start..end by one constant.  For "max" the cost is the error the
    midpoint constant actually achieves; for "sum" it is the half-range
    (u - l) / 2 used by the additive recurrence.
    """
    u, l = range_tables(f.values)
    if combine == "max":
        mid = (u + l) / 2.0
        h = np.maximum(u - mid, mid - l)
    else:
        h = (u - l) / 2.0
    return np.ascontiguousarray(h.T)


def _dp_tables(ht: np.ndarray, k: int, combine: str) -> tuple[np.ndarray, np.ndarray]:
    """Fill cost-to-go and split-choice tables for budgets 1..k.

    c[j-1, i] is the best objective for input segments 0..i using at most
    j blocks; choice[j-1, i] is 0 when one block covers 0..i, otherwise
    the first segment index of the last block.  Ties prefer the unsplit
    option and then the smallest split index.
    """
    t = ht.shape[0]
    c = np.empty((k, t), dtype=np.float64)
    choice = np.zeros((k, t), dtype=np.int64)
    c[0, :] = ht[:, 0]
    for j in range(1, k):
        c[j, 0] = c[0, 0]
        for i in range(1, t):
            whole = c[0, i]
            if combine == "max":
                cand = np.maximum(c[j - 1, :i], ht[i, 1 : i + 1])
            else:
                cand = c[j - 1, :i] + ht[i, 1 : i + 1]
            s = int(np.argmin(cand))
            if whole <= cand[s]:
                c[j, i] = whole
                choice[j, i] = 0
            else:
                c[j, i] = cand[s]
                choice[j, i] = s + 1
    return c, choice


def _backtrack(choice: np.ndarray, k_eff: int, t: int) -> list[tuple[int, int]]:
    blocks: list[tuple[int, int]] = []
    j, i = k_eff - 1, t - 1
    while True:
        s = int(choice[j, i])
        if s == 0:
            blocks.append((0, i))
            break
        blocks.append((s, i))
        i = s - 1
        j -= 1
    blocks.reverse()
    return blocks


def fit(f: PiecewiseConstant, k: int, combine: str = "max") -> FitResult:
    """Best approximant of f with at most k segments.

    A budget larger than the input's segment count is clamped, giving the
    input back with error 0.
    """
    if combine not in ("max", "sum"):
        raise ValueError(f"combine must be 'max' or 'sum', got {combine!r}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    t = f.segment_count
    k_eff = min(k, t)
    ht = _cost_tables(f, combine)
    c, choice = _dp_tables(ht, k_eff, combine)
    blocks = _backtrack(choice, k_eff, t)

    u, l = range_tables(f.values)
    breaks = [f.breakpoints[s] for s, _ in blocks] + [f.hi]
    mids = [(u[s, e] + l[s, e]) / 2.0 for s, e in blocks]
    approximant = PiecewiseConstant(breaks, mids)
    return FitResult(
        error=float(c[k_eff - 1, t - 1]),
        approximant=approximant,
        splits=tuple(s for s, _ in blocks),
    )


def fit_error_profile(f: PiecewiseConstant, k_max: int, combine: str = "max") -> np.ndarray:
    """Fit errors for every budget 1..k_max from a single DP table.

    Entry j-1 equals fit(f, j).error.  Nonincreasing in j, and exactly 0
    from j = segment_count on.
    """
    if combine not in ("max", "sum"):
        raise ValueError(f"combine must be 'max' or 'sum', got {combine!r}")
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    t = f.segment_count
    k_eff = min(k_max, t)
    ht = _cost_tables(f, combine)
    c, _ = _dp_tables(ht, k_eff, combine)
    prof = np.empty(k_max, dtype=np.float64)
    prof[:k_eff] = c[:, t - 1]
    prof[k_eff:] = c[k_eff - 1, t - 1]  # extra budget cannot help past k = t
    return prof


def brute_force_fit(f: PiecewiseConstant, k: int, combine: str = "max") -> float:
    """Exact minimal error by enumerating every block partition (t <= 20).

    Independent of the DP recurrence; used as its oracle.  Costs are the
    same per-block quantities as in fit(), so agreement is exact.
    """
    from itertools import combinations

    if combine not in ("max", "sum"):
        raise ValueError(f"combine must be 'max' or 'sum', got {combine!r}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    t = f.segment_count
    if t > _BRUTE_FORCE_MAX_T:
        raise ResourceLimitError(
            f"brute-force enumeration guarded at t <= {_BRUTE_FORCE_MAX_T}, got {t}"
        )
    vals = np.asarray(f.values)

    def block_cost(s: int, e: int) -> float:
        block = vals[s : e + 1]
        u = float(block.max())
        l = float(block.min())
        if combine == "max":
            mid = (u + l) / 2.0
            return max(u - mid, mid - l)
        return (u - l) / 2.0

    best = np.inf
    for nb in range(1, min(k, t) + 1):
        for cut in combinations(range(1, t), nb - 1):
            starts = (0,) + cut
            ends = tuple(s - 1 for s in cut) + (t - 1,)
            costs = [block_cost(s, e) for s, e in zip(starts, ends)]
            total = max(costs) if combine == "max" else sum(costs)
            if total < best:
                best = total
    return float(best)
