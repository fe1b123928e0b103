"""Empirical Rademacher complexity of piecewise-constant function classes.

A sample of N instances is represented by the N dual functions it induces:
parameter r maps to the N-vector of per-instance values.  Because each
dual is a step function, that vector only takes finitely many distinct
values A (at most N(j-1)+1 of them when every dual has at most j pieces),
and the empirical Rademacher complexity

    (1/N) E_sigma [ sup_r  sum_i sigma_i f_r(x_i) ]

is a finite maximum over A inside the expectation.  Small N is handled by
exact enumeration of sign patterns; larger N by a seeded Monte Carlo
estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ResourceLimitError
from .piecewise import PiecewiseConstant

__all__ = ["DualSample", "distinct_vectors", "empirical_rad_exact", "empirical_rad_mc"]

_EXACT_MAX_N = 20
_MC_SHARD = 4096
_CHUNK = 4096


@dataclass(frozen=True)
class DualSample:
    """Dual functions of a fixed instance sample, all on one parameter domain."""

    duals: tuple[PiecewiseConstant, ...]

    def __init__(self, duals: Sequence[PiecewiseConstant]):
        ds = tuple(duals)
        if not ds:
            raise ValueError("a dual sample needs at least one function")
        for f in ds[1:]:
            if not f.same_domain(ds[0]):
                raise ValueError("all duals must share one domain")
        object.__setattr__(self, "duals", ds)

    @property
    def n(self) -> int:
        return len(self.duals)


def distinct_vectors(sample: DualSample) -> np.ndarray:
    """The distinct value vectors (r -> (f_1(r), ..., f_N(r))) as rows.

    Rows appear in order of first occurrence scanning the domain left to
    right.  Row count is at most N(j-1)+1 when every dual has at most j
    segments.
    """
    breaks = sorted(set().union(*(f.breakpoints for f in sample.duals)))
    segment_los = np.asarray(breaks[:-1], dtype=np.float64)
    cols = []
    for f in sample.duals:
        idx = np.searchsorted(f.breakpoints, segment_los, side="right") - 1
        cols.append(np.asarray(f.values, dtype=np.float64)[idx])
    vectors = np.column_stack(cols)
    _, first = np.unique(vectors, axis=0, return_index=True)
    return vectors[np.sort(first)]


def _as_vectors(sample: DualSample | np.ndarray) -> np.ndarray:
    if isinstance(sample, DualSample):
        return distinct_vectors(sample)
    arr = np.asarray(sample, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("expected a DualSample or a nonempty (K, N) vector array")
    return arr


def _sign_block(start: int, stop: int, n_bits: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.uint32)
    bits = (idx[:, None] >> np.arange(n_bits, dtype=np.uint32)) & 1
    return bits.astype(np.float64) * 2.0 - 1.0


def empirical_rad_exact(sample: DualSample | np.ndarray) -> float:
    """Exact empirical Rademacher complexity by sign-pattern enumeration.

    Guarded at N <= 20.  Sign vectors are enumerated in (sigma, -sigma)
    pairs, which halves the work and makes the contributions of a
    one-vector class cancel exactly, so degenerate classes report 0.0
    rather than rounding noise.
    """
    a = _as_vectors(sample)
    n = a.shape[1]
    if n > _EXACT_MAX_N:
        raise ResourceLimitError(
            f"exact enumeration guarded at N <= {_EXACT_MAX_N}, got {n}; use empirical_rad_mc"
        )
    half = 1 << (n - 1)
    acc = 0.0
    at = a.T
    for start in range(0, half, _CHUNK):
        stop = min(start + _CHUNK, half)
        signs = _sign_block(start, stop, n - 1)
        # fix the last coordinate to +1; its negation covers the other half
        dots = signs @ at[:-1] + at[-1]
        acc += float((dots.max(axis=1) - dots.min(axis=1)).sum())
    return acc / (1 << n) / n


def empirical_rad_mc(
    sample: DualSample | np.ndarray, draws: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo estimate of the empirical Rademacher complexity.

    Returns (estimate, stderr).  Deterministic for a fixed seed: draws are
    processed in fixed-size shards whose generators derive from the root
    seed by counter jumps, so the estimate is bit-identical no matter how
    the shards would be scheduled.
    """
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    a = _as_vectors(sample)
    n = a.shape[1]
    at = a.T
    root = np.random.Philox(key=seed)
    s1 = 0.0
    s2 = 0.0
    for shard_index, start in enumerate(range(0, draws, _MC_SHARD)):
        count = min(_MC_SHARD, draws - start)
        gen = np.random.Generator(root.jumped(shard_index))
        bits = gen.integers(0, 2, size=(count, n))
        signs = bits.astype(np.float64) * 2.0 - 1.0
        per_draw = (signs @ at).max(axis=1) / n
        s1 += float(per_draw.sum())
        s2 += float((per_draw * per_draw).sum())
    estimate = s1 / draws
    if draws == 1:
        return estimate, 0.0
    var = max(0.0, (s2 - s1 * s1 / draws) / (draws - 1))
    return estimate, float(np.sqrt(var / draws))
