"""Synthetic set-packing instances and their parameter-to-performance duals.

Each instance is a winner-determination style auction: bids request bundles
of goods, each good can be sold once, and the solver maximizes total price.
The dual of an instance maps the branching-rule mixture parameter r to
normalized branch-and-bound tree size; it is piecewise constant in r because
finitely many score comparisons decide the tree.  Duals are recovered by
probing a base grid and bisecting every value change down to ``grid_eps``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .dpfit import fit_error_profile
from .errors import DomainError
from .piecewise import PiecewiseConstant
from .solver import BnbConfig, IntegerProgram, Row, branch_and_bound

__all__ = [
    "WdpGenConfig",
    "DualExtraction",
    "KappaSelection",
    "ApproxProfile",
    "instance_seeds",
    "generate_instance",
    "extract_dual",
    "select_kappa",
    "approx_profile",
]

_BASE_GRID_STEP = 2.0**-7


@dataclass(frozen=True)
class WdpGenConfig:
    """Generator settings for one set-packing instance.

    Bundle sizes are uniform on [bundle_min, bundle_max]; a bid's price is
    its bundle size times a uniform draw from [price_lo, price_hi].
    """

    goods: int = 10
    bids: int = 20
    bundle_min: int = 2
    bundle_max: int = 5
    price_lo: float = 0.8
    price_hi: float = 1.25
    seed: int = 0

    def __post_init__(self) -> None:
        if self.goods < 1 or self.bids < 1:
            raise DomainError("goods and bids must be positive")
        if not 1 <= self.bundle_min <= self.bundle_max <= self.goods:
            raise DomainError(
                "need 1 <= bundle_min <= bundle_max <= goods, got "
                f"[{self.bundle_min}, {self.bundle_max}] with {self.goods} goods"
            )
        if not 0.0 < self.price_lo <= self.price_hi:
            raise DomainError("price range must satisfy 0 < price_lo <= price_hi")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 bits")


def instance_seeds(root_seed: int, count: int) -> tuple[int, ...]:
    """Derive ``count`` independent per-instance seeds from one root seed."""
    if count < 0:
        raise DomainError("count must be nonnegative")
    if not 0 <= root_seed < 2**64:
        raise DomainError("root seed must fit in 64 bits")
    if count == 0:
        return ()
    state = np.random.SeedSequence(root_seed).generate_state(count, np.uint64)
    return tuple(int(s) for s in state)


def generate_instance(cfg: WdpGenConfig) -> IntegerProgram:
    """Draw one set-packing instance: max price subject to one sale per good."""
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    goods_to_bids: list[list[int]] = [[] for _ in range(cfg.goods)]
    prices: list[float] = []
    for j in range(cfg.bids):
        size = int(rng.integers(cfg.bundle_min, cfg.bundle_max + 1))
        bundle = rng.choice(cfg.goods, size=size, replace=False)
        for g in bundle:
            goods_to_bids[g].append(j)
        prices.append(float(size * rng.uniform(cfg.price_lo, cfg.price_hi)))
    rows = [
        Row(bids, [1.0] * len(bids), 1.0)
        for bids in goods_to_bids
        if bids  # a good nobody bid on constrains nothing
    ]
    return IntegerProgram(cfg.bids, prices, rows, range(cfg.bids))


@dataclass(frozen=True)
class DualExtraction:
    """One instance's dual: normalized tree size as a function of r."""

    instance: str
    dual: PiecewiseConstant
    grid_eps: float
    kappa: int
    rule1: str
    rule2: str

    def __post_init__(self) -> None:
        if self.kappa < 1:
            raise DomainError("kappa must be at least 1")
        if not self.grid_eps > 0.0:
            raise DomainError("grid_eps must be positive")
        for v in self.dual.values:
            scaled = v * self.kappa
            if abs(scaled - round(scaled)) > 1e-6 or not 1 <= round(scaled) <= self.kappa:
                raise DomainError(
                    f"dual value {v} is not an attained tree size over kappa={self.kappa}"
                )

    def to_dict(self) -> dict[str, Any]:
        payload = self.dual.to_dict()
        payload.update(
            instance=self.instance,
            kappa=self.kappa,
            grid_eps=self.grid_eps,
            rules=f"{self.rule1}-{self.rule2}",
        )
        return payload

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DualExtraction":
        try:
            dual = PiecewiseConstant.from_dict(
                {k: data[k] for k in ("lo", "hi", "breaks", "values")}
            )
            rule1, rule2 = str(data["rules"]).split("-")
            return cls(
                instance=str(data["instance"]),
                dual=dual,
                grid_eps=float(data["grid_eps"]),
                kappa=int(data["kappa"]),
                rule1=rule1,
                rule2=rule2,
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise DomainError(f"malformed dual extraction: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DualExtraction":
        return cls.from_dict(json.loads(text))


def _refine(
    h: Callable[[float], float],
    lo: float,
    v_lo: float,
    hi: float,
    v_hi: float,
    grid_eps: float,
) -> list[tuple[float, float]]:
    """Transitions in (lo, hi] as (breakpoint, value-to-the-right) pairs.

    Bisects until the bracketing interval is narrower than grid_eps and
    places the breakpoint at its midpoint.  A plateau narrower than the
    final interval can still be missed; that is the documented resolution
    limit of grid probing.
    """
    if v_lo == v_hi:
        return []
    if hi - lo <= grid_eps:
        return [((lo + hi) / 2.0, v_hi)]
    mid = (lo + hi) / 2.0
    v_mid = h(mid)
    return _refine(h, lo, v_lo, mid, v_mid, grid_eps) + _refine(
        h, mid, v_mid, hi, v_hi, grid_eps
    )


def extract_dual(
    ip: IntegerProgram,
    rule1: str,
    rule2: str,
    kappa: int,
    grid_eps: float = 1e-4,
    *,
    instance_id: str = "",
    node_policy: str = "best_bound",
    lp_cache: dict | None = None,
) -> DualExtraction:
    """Recover the piecewise-constant dual of ``ip`` over r in [0, 1).

    Normalized tree size is evaluated on a uniform grid of spacing 2^-7;
    every adjacent value change is bisected down to ``grid_eps`` and becomes
    a breakpoint at the midpoint of the final bracket.  Breakpoints closer
    than grid_eps / 2 are merged by dropping the earlier transition.  All
    probe points are dyadic rationals, so results are exactly reproducible.
    """
    if not grid_eps > 0.0:
        raise DomainError("grid_eps must be positive")
    cache = {} if lp_cache is None else lp_cache
    memo: dict[float, float] = {}

    def h(r: float) -> float:
        got = memo.get(r)
        if got is None:
            cfg = BnbConfig(rule1, rule2, r, kappa, node_policy=node_policy)
            got = branch_and_bound(ip, cfg, lp_cache=cache).normalized
            memo[r] = got
        return got

    n_cells = round(1.0 / _BASE_GRID_STEP)
    grid = [i * _BASE_GRID_STEP for i in range(n_cells + 1)]
    values = [h(r) for r in grid]
    transitions: list[tuple[float, float]] = []
    for (lo, v_lo), (hi, v_hi) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        transitions.extend(_refine(h, lo, v_lo, hi, v_hi, grid_eps))
    merged: list[tuple[float, float]] = []
    for bp, val in transitions:
        if merged and bp - merged[-1][0] < grid_eps / 2.0:
            merged[-1] = (bp, val)  # sliver plateau absorbed into its left neighbor
        else:
            merged.append((bp, val))
    breaks = [0.0] + [bp for bp, _ in merged] + [1.0]
    vals = [values[0]] + [v for _, v in merged]
    dual = PiecewiseConstant(breaks, vals)
    return DualExtraction(
        instance=instance_id,
        dual=dual,
        grid_eps=grid_eps,
        kappa=kappa,
        rule1=rule1,
        rule2=rule2,
    )


class KappaSelection(NamedTuple):
    """Chosen tree-size cap and whether any probe run hit the hard cap."""

    kappa: int
    saturated: bool


def select_kappa(
    instances: Sequence[IntegerProgram],
    rule1: str,
    rule2: str,
    r_grid: Iterable[float] | None = None,
    hard_cap: int = 2000,
    *,
    node_policy: str = "best_bound",
) -> KappaSelection:
    """Largest tree size over instances x r_grid, run under ``hard_cap``.

    Returns (hard_cap, saturated=True) if any probe was stopped by the cap,
    otherwise the observed maximum with saturated=False.  The result does
    not depend on instance order.
    """
    if not instances:
        raise DomainError("need at least one instance")
    if hard_cap < 1:
        raise DomainError("hard_cap must be at least 1")
    rs = (
        [i / 100.0 for i in range(101)]
        if r_grid is None
        else [float(r) for r in r_grid]
    )
    if not rs:
        raise DomainError("r_grid must be nonempty")
    worst = 1
    saturated = False
    for ip in instances:
        cache: dict = {}
        for r in rs:
            cfg = BnbConfig(rule1, rule2, r, hard_cap, node_policy=node_policy)
            out = branch_and_bound(ip, cfg, lp_cache=cache)
            worst = max(worst, out.tree_size)
            saturated = saturated or out.capped
    return KappaSelection(hard_cap if saturated else worst, saturated)


class ApproxProfile(NamedTuple):
    """Mean best-fit errors by piece budget, plus the largest piece count."""

    e_hat: dict[int, float]
    j_star: int


def approx_profile(
    duals: Sequence[PiecewiseConstant], j_range: Iterable[int]
) -> ApproxProfile:
    """Average piece-budget fit error over ``duals`` for each j in j_range.

    e_hat[j] is the mean over duals of the best j-piece approximation error;
    j_star is the maximum canonical segment count, the budget at which every
    dual is fit exactly.
    """
    if not duals:
        raise DomainError("need at least one dual")
    js = sorted({int(j) for j in j_range})
    if not js:
        raise DomainError("j_range must be nonempty")
    if js[0] < 1:
        raise DomainError("piece budgets must be at least 1")
    j_max = js[-1]
    total = np.zeros(j_max)
    for dual in duals:
        total += fit_error_profile(dual, j_max)
    mean = total / len(duals)
    e_hat = {j: float(mean[j - 1]) for j in js}
    j_star = max(d.segment_count for d in duals)
    return ApproxProfile(e_hat, j_star)
