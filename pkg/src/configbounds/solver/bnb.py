"""Branch and bound for binary programs with a parametrized branching rule.

The branching variable at each node is chosen by scoring every fractional
candidate from the objective changes of its two child LPs and picking the
highest score (ties to the smallest variable index).  The score is a convex
mix ``(1 - r) * rule1 + r * rule2`` of two base rules, so a one-dimensional
parameter ``r`` sweeps between two branching strategies.

Node LPs are cached by their fixing set alone.  The cache can be shared
across runs with different ``(rule1, rule2, r)`` settings on the same
instance: which LPs exist depends only on which nodes get expanded, and a
node's children are the same regardless of how it was reached.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Mapping, MutableMapping

import numpy as np

from ..errors import DomainError
from .ip import IntegerProgram
from .lp import LpResult, _solve_dense

__all__ = ["BnbConfig", "BnbResult", "rule_score", "branch_scores", "branch_and_bound"]

_RULES = ("L", "S", "A", "P")
_PRODUCT_FLOOR = 1e-6

# a node key is the sorted tuple of (variable, value) fixings on its path
Fixings = tuple[tuple[int, int], ...]


def rule_score(rule: str, delta_a: float, delta_b: float) -> float:
    """Score a branching candidate from its two child objective decreases.

    Rules: "L" takes the larger decrease, "S" the smaller, "A" the mix
    (1/6) * larger + (5/6) * smaller, and "P" the product with each factor
    floored at 1e-6 so one saturated child cannot zero it out.
    """
    if rule == "L":
        return max(delta_a, delta_b)
    if rule == "S":
        return min(delta_a, delta_b)
    if rule == "A":
        return max(delta_a, delta_b) / 6.0 + 5.0 * min(delta_a, delta_b) / 6.0
    if rule == "P":
        return max(delta_a, _PRODUCT_FLOOR) * max(delta_b, _PRODUCT_FLOOR)
    raise DomainError(f"unknown branching rule {rule!r}, expected one of {_RULES}")


@dataclass(frozen=True)
class BnbConfig:
    """Solver settings: branching-rule mix, node budget, and node order."""

    rule1: str
    rule2: str
    r: float
    kappa: int
    node_policy: str = "best_bound"
    int_tol: float = 1e-6
    fathom_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.rule1 not in _RULES or self.rule2 not in _RULES:
            raise DomainError(f"branching rules must be from {_RULES}")
        if not 0.0 <= self.r <= 1.0:
            raise DomainError(f"mix parameter must lie in [0, 1], got {self.r}")
        if self.kappa < 1:
            raise DomainError("node budget must be at least 1")
        if self.node_policy not in ("best_bound", "depth_first"):
            raise DomainError(f"unknown node policy {self.node_policy!r}")
        if not self.int_tol > 0.0 or not self.fathom_tol > 0.0:
            raise DomainError("tolerances must be positive")


@dataclass(frozen=True)
class BnbResult:
    """Run outcome.

    ``tree_size`` counts nodes whose LP relaxation was solved (the root is
    1).  ``capped`` flags runs stopped by the node budget with work left.
    ``normalized`` is min(tree_size, kappa) / kappa.  The incumbent fields
    are None when no integral point was found before stopping.
    """

    tree_size: int
    capped: bool
    incumbent_value: float | None
    incumbent: tuple[float, ...] | None
    normalized: float


def _combined_score(config: BnbConfig, delta_a: float, delta_b: float) -> float:
    s1 = rule_score(config.rule1, delta_a, delta_b)
    if config.rule1 == config.rule2:
        return s1
    s2 = rule_score(config.rule2, delta_a, delta_b)
    return (1.0 - config.r) * s1 + config.r * s2


def _child_key(key: Fixings, var: int, value: int) -> Fixings:
    return tuple(sorted(key + ((var, value),)))


def _fractional(
    x: np.ndarray, binary: tuple[int, ...], fixed: Mapping[int, int], tol: float
) -> list[int]:
    return [
        i
        for i in binary
        if i not in fixed and abs(x[i] - round(x[i])) > tol
    ]


def _score_candidates(
    node_lp: Callable[[Fixings], LpResult],
    key: Fixings,
    parent_value: float,
    frac: list[int],
    sentinel: float,
    config: BnbConfig,
) -> list[tuple[int, float]]:
    scored = []
    for i in frac:
        up = node_lp(_child_key(key, i, 1))
        down = node_lp(_child_key(key, i, 0))
        d_up = parent_value - up.value if up.status == "optimal" else sentinel
        d_down = parent_value - down.value if down.status == "optimal" else sentinel
        scored.append((i, _combined_score(config, d_up, d_down)))
    return scored


def _validate_fixings(ip: IntegerProgram, fixings: Mapping[int, int]) -> Fixings:
    for i, v in fixings.items():
        if not 0 <= int(i) < ip.n:
            raise DomainError(f"fixed variable {i} out of range")
        if v not in (0, 1):
            raise DomainError(f"fixing for variable {i} must be 0 or 1, got {v}")
    return tuple(sorted((int(i), int(v)) for i, v in fixings.items()))


def _infeasible_sentinel(c: np.ndarray) -> float:
    # exceeds any feasible objective gap over the unit box
    return 2.0 * (float(np.abs(c).sum()) + 1.0)


def branch_scores(
    ip: IntegerProgram,
    config: BnbConfig,
    fixings: Mapping[int, int] | None = None,
) -> dict[int, float]:
    """Combined branching scores for every fractional variable at one node.

    Raises DomainError if the node LP is infeasible or already integral.
    """
    key = _validate_fixings(ip, fixings or {})
    a, b = ip.dense()
    c = ip.objective()
    cache: dict[Fixings, LpResult] = {}

    def node_lp(k: Fixings) -> LpResult:
        res = cache.get(k)
        if res is None:
            res = _solve_dense(a, b, c, dict(k))
            cache[k] = res
        return res

    res = node_lp(key)
    if res.status != "optimal":
        raise DomainError("node LP is infeasible, no branching candidates")
    frac = _fractional(res.x, ip.binary, dict(key), config.int_tol)
    if not frac:
        raise DomainError("node LP is already integral, nothing to branch on")
    sentinel = _infeasible_sentinel(c)
    return dict(_score_candidates(node_lp, key, res.value, frac, sentinel, config))


def branch_and_bound(
    ip: IntegerProgram,
    config: BnbConfig,
    lp_cache: MutableMapping[Fixings, LpResult] | None = None,
) -> BnbResult:
    """Run branch and bound on ``ip`` under ``config``.

    ``lp_cache`` maps fixing tuples to LP results and may be shared across
    runs on the same instance; pass a fresh dict per instance.  Every popped
    node counts toward ``tree_size`` whether it is expanded, fathomed, found
    integral, or infeasible.  Child nodes are always pushed unpruned so the
    count does not depend on the incumbent discovery order.
    """
    a, b = ip.dense()
    c = ip.objective()
    sentinel = _infeasible_sentinel(c)
    cache: MutableMapping[Fixings, LpResult] = {} if lp_cache is None else lp_cache

    def node_lp(k: Fixings) -> LpResult:
        res = cache.get(k)
        if res is None:
            res = _solve_dense(a, b, c, dict(k))
            cache[k] = res
        return res

    best_first = config.node_policy == "best_bound"
    heap: list[tuple[float, int, Fixings]] = []
    stack: list[Fixings] = []
    root: Fixings = ()
    if best_first:
        heapq.heappush(heap, (-math.inf, 0, root))
    else:
        stack.append(root)
    counter = 0
    incumbent_value: float | None = None
    incumbent: tuple[float, ...] | None = None
    tree_size = 0
    while tree_size < config.kappa:
        if best_first:
            if not heap:
                break
            _, _, key = heapq.heappop(heap)
        else:
            if not stack:
                break
            key = stack.pop()
        tree_size += 1
        res = node_lp(key)
        if res.status != "optimal":
            continue
        if incumbent_value is not None and res.value <= incumbent_value + config.fathom_tol:
            continue
        fixed = dict(key)
        frac = _fractional(res.x, ip.binary, fixed, config.int_tol)
        if not frac:
            z = res.x.copy()
            for i in ip.binary:
                z[i] = round(z[i])
            val = float(c @ z)
            if incumbent_value is None or val > incumbent_value:
                incumbent_value = val
                incumbent = tuple(float(v) for v in z)
            continue
        scored = _score_candidates(node_lp, key, res.value, frac, sentinel, config)
        best_i, best_s = scored[0]
        for i, s in scored[1:]:
            if s > best_s:
                best_i, best_s = i, s
        down_key = _child_key(key, best_i, 0)
        up_key = _child_key(key, best_i, 1)
        if best_first:
            for child in (down_key, up_key):
                child_res = cache[child]
                bound = child_res.value if child_res.status == "optimal" else -math.inf
                counter += 1
                heapq.heappush(heap, (-bound, counter, child))
        else:
            # pop() takes the most recent push, so the up child is dived first
            stack.append(down_key)
            stack.append(up_key)
    remaining = bool(heap) if best_first else bool(stack)
    capped = remaining and tree_size >= config.kappa
    normalized = min(tree_size, config.kappa) / config.kappa
    return BnbResult(
        tree_size=tree_size,
        capped=capped,
        incumbent_value=incumbent_value,
        incumbent=incumbent,
        normalized=normalized,
    )
