"""Piecewise-constant step functions on a half-open interval.

A function with t segments is stored as t+1 breakpoints (both domain
endpoints included) and t values in [0, 1].  Segments are right-open:
the value at breakpoint a_i holds on [a_i, a_{i+1}).  Instances are
canonical, meaning adjacent segments with exactly equal values are merged
at construction, so two instances describe the same function iff they
compare equal.

Breakpoints are compared exactly as floats.  Any snapping of nearly equal
breakpoints is the responsibility of whatever produced them (see the
extraction code in `configspace`), not of this module.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DomainError

__all__ = [
    "PiecewiseConstant",
    "common_refinement",
    "linf_distance",
    "lp_distance",
]


@dataclass(frozen=True)
class PiecewiseConstant:
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __init__(self, breakpoints: Sequence[float], values: Sequence[float]):
        bps = tuple(float(b) for b in breakpoints)
        vals = tuple(float(v) for v in values)
        if len(bps) < 2:
            raise ValueError("need at least the two domain endpoints as breakpoints")
        if len(vals) != len(bps) - 1:
            raise ValueError(
                f"{len(bps)} breakpoints require {len(bps) - 1} values, got {len(vals)}"
            )
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise ValueError(f"breakpoints must be strictly increasing, got {a} before {b}")
        for v in vals:
            if not 0.0 <= v <= 1.0:  # also rejects NaN
                raise ValueError(f"values must lie in [0, 1], got {v}")
        merged_b = [bps[0]]
        merged_v = [vals[0]]
        for b, v in zip(bps[1:-1], vals[1:]):
            if v == merged_v[-1]:
                continue
            merged_b.append(b)
            merged_v.append(v)
        merged_b.append(bps[-1])
        object.__setattr__(self, "breakpoints", tuple(merged_b))
        object.__setattr__(self, "values", tuple(merged_v))

    @classmethod
    def constant(cls, value: float, lo: float = 0.0, hi: float = 1.0) -> "PiecewiseConstant":
        return cls((lo, hi), (value,))

    @property
    def lo(self) -> float:
        return self.breakpoints[0]

    @property
    def hi(self) -> float:
        return self.breakpoints[-1]

    @property
    def segment_count(self) -> int:
        return len(self.values)

    def segments(self) -> Iterator[tuple[float, float, float]]:
        """Yield (lo, hi, value) triples in domain order."""
        for a, b, v in zip(self.breakpoints, self.breakpoints[1:], self.values):
            yield a, b, v

    def value_at(self, r: float) -> float:
        if not self.lo <= r < self.hi:
            raise DomainError(f"point {r} outside domain [{self.lo}, {self.hi})")
        return self.values[bisect_right(self.breakpoints, r) - 1]

    def __call__(self, r: float) -> float:
        return self.value_at(r)

    def same_domain(self, other: "PiecewiseConstant") -> bool:
        return self.lo == other.lo and self.hi == other.hi

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "breaks": list(self.breakpoints),
            "values": list(self.values),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "PiecewiseConstant":
        try:
            lo = payload["lo"]
            hi = payload["hi"]
            breaks = payload["breaks"]
            values = payload["values"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed piecewise payload: missing {exc}") from exc
        f = cls(breaks, values)
        if f.lo != lo or f.hi != hi:
            raise ValueError(
                f"payload endpoints ({lo}, {hi}) disagree with breaks ({f.lo}, {f.hi})"
            )
        return f

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseConstant":
        return cls.from_dict(json.loads(text))


def common_refinement(
    f: PiecewiseConstant, g: PiecewiseConstant
) -> tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]:
    """Shared breakpoints of f and g plus both value sequences on them.

    Returns (breaks, f_values, g_values) where breaks has one more entry
    than each value sequence and covers the common domain.
    """
    if not f.same_domain(g):
        raise ValueError(
            f"domains differ: [{f.lo}, {f.hi}) vs [{g.lo}, {g.hi})"
        )
    breaks = tuple(sorted(set(f.breakpoints) | set(g.breakpoints)))
    fvals = tuple(f.value_at(a) for a in breaks[:-1])
    gvals = tuple(g.value_at(a) for a in breaks[:-1])
    return breaks, fvals, gvals


def linf_distance(f: PiecewiseConstant, g: PiecewiseConstant) -> float:
    """sup-norm distance, exact for step functions via the common refinement."""
    _, fvals, gvals = common_refinement(f, g)
    return max(abs(a - b) for a, b in zip(fvals, gvals))


def lp_distance(f: PiecewiseConstant, g: PiecewiseConstant, p: float) -> float:
    """L^p distance (sum of |difference|^p times segment length, to the 1/p)."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    breaks, fvals, gvals = common_refinement(f, g)
    total = 0.0
    for a, b, fv, gv in zip(breaks, breaks[1:], fvals, gvals):
        total += abs(fv - gv) ** p * (b - a)
    return total ** (1.0 / p)
