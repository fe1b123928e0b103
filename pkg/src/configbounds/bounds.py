"""Generalization bounds for tree-size prediction from N sampled instances.

Three bound families share the same failure probability budget delta:

* worst_case_bound: distribution-independent.  The dual class of a
  branch-and-bound tree on n binary variables, capped at kappa nodes, has
  at most N(n^{2(kappa+1)} - 1) + 1 distinct behaviors on N instances, so
  the complexity term is driven by 2(kappa+1) ln n.
* srm_bound: data-dependent.  For each candidate piece budget j it
  combines the measured approximation profile e_hat_j (mean sup-error of
  the best j-piece surrogates, estimated from M duals), the complexity of
  j-piece step classes, and a union-bound tail over j, then takes the best
  j.
* baseline_bound: the non-adaptive alternative that spends the whole
  budget on the single j* needed to represent the duals exactly.

All bounds are on the absolute gap between empirical and true normalized
tree size, for functions taking values in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

__all__ = [
    "massart_bound",
    "pwc_rad_bound",
    "wc_log_term",
    "worst_case_bound",
    "hoeffding_slack",
    "BoundInputs",
    "srm_bound",
    "baseline_bound",
    "BoundRow",
    "BoundCurve",
    "build_curve",
]

# exponent size above which n^{2(kappa+1)} is evaluated in log space
_WC_EXACT_EXPONENT_LIMIT = 40.0

# verbatim estimation slack used by the fixed-budget baseline
BASELINE_SLACK = 0.023


def massart_bound(set_size: int, n_samples: int) -> float:
    """Finite-class bound sqrt(2 ln|A| / N) for vectors in [0, 1]^N."""
    if set_size < 1:
        raise ValueError(f"set_size must be >= 1, got {set_size}")
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    return math.sqrt(2.0 * math.log(set_size) / n_samples)


def pwc_rad_bound(n_samples: int, j: int) -> float:
    """Massart applied to j-piece step duals: |A| <= N(j-1)+1."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    return massart_bound(n_samples * (j - 1) + 1, n_samples)


def wc_log_term(n_samples: int, n_vars: int, kappa: int, path: str = "auto") -> float:
    """ln(N(n^{2(kappa+1)} - 1) + 1), switching to log space for large exponents.

    The exact and asymptotic paths agree to machine precision near the
    switch; ``path`` forces one side for verification.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    if n_vars < 2:
        raise ValueError(f"n_vars must be >= 2, got {n_vars}")
    if kappa < 1:
        raise ValueError(f"kappa must be >= 1, got {kappa}")
    exponent = 2.0 * (kappa + 1) * math.log(n_vars)
    if path == "auto":
        path = "exact" if exponent <= _WC_EXACT_EXPONENT_LIMIT else "asymptotic"
    if path == "exact":
        if exponent > 700.0:  # would overflow float64
            raise ValueError("exact path infeasible at this size, use asymptotic")
        return math.log(n_samples * (float(n_vars) ** (2 * (kappa + 1)) - 1.0) + 1.0)
    if path == "asymptotic":
        return math.log(n_samples) + exponent
    raise ValueError(f"path must be 'auto', 'exact' or 'asymptotic', got {path!r}")


def worst_case_bound(n_samples: int, n_vars: int, kappa: int, delta: float) -> float:
    """Distribution-independent gap bound 2 sqrt(2 L / N) + 3 sqrt(ln(2/delta) / 2N)."""
    _check_delta(delta)
    term = wc_log_term(n_samples, n_vars, kappa)
    return 2.0 * math.sqrt(2.0 * term / n_samples) + 3.0 * math.sqrt(
        math.log(2.0 / delta) / (2.0 * n_samples)
    )


def hoeffding_slack(m_samples: int, delta: float) -> float:
    """One-sided Hoeffding term sqrt(ln(1/delta) / 2M) for [0, 1] means."""
    if m_samples < 1:
        raise ValueError(f"m_samples must be >= 1, got {m_samples}")
    _check_delta(delta)
    return math.sqrt(math.log(1.0 / delta) / (2.0 * m_samples))


@dataclass(frozen=True)
class BoundInputs:
    """Everything srm_bound needs at one sample size N.

    e_hat maps piece budget j to the measured mean approximation error of
    the best j-piece surrogates over m_profile duals.  The profile must be
    nonincreasing in j (more pieces never fit worse); that is asserted
    here as a defense, not repaired.
    """

    n_samples: int
    delta: float
    n_vars: int
    kappa: int
    e_hat: Mapping[int, float]
    m_profile: int

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        _check_delta(self.delta)
        if self.n_vars < 2:
            raise ValueError(f"n_vars must be >= 2, got {self.n_vars}")
        if self.kappa < 1:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")
        if self.m_profile < 1:
            raise ValueError(f"m_profile must be >= 1, got {self.m_profile}")
        if not self.e_hat:
            raise ValueError("e_hat profile is empty")
        prev = None
        for j in sorted(self.e_hat):
            v = self.e_hat[j]
            if j < 1 or not 0.0 <= v <= 1.0:
                raise ValueError(f"bad profile entry j={j}, e_hat={v}")
            if prev is not None and v > prev + 1e-12:
                raise ValueError(f"profile must be nonincreasing, rises at j={j}")
            prev = v


def _srm_term(inputs: BoundInputs, j: int, paper_mode: bool) -> float:
    e_j = inputs.e_hat.get(j)
    if e_j is None:
        raise ValueError(f"profile has no entry for j={j}")
    n = inputs.n_samples
    if paper_mode:
        # fixed published budget: slack 1/40 and tail written for delta = 0.01
        slack = 1.0 / 40.0
        tail = math.sqrt(2.0 / n * math.log((20.0 * math.pi * j) ** 2 / 3.0))
    else:
        half_delta = inputs.delta / 2.0
        slack = hoeffding_slack(inputs.m_profile, half_delta)
        tail = math.sqrt(2.0 / n * math.log(2.0 * (math.pi * j) ** 2 / (3.0 * half_delta)))
    return 2.0 * (e_j + slack) + 2.0 * pwc_rad_bound(n, j) + tail


def srm_bound(
    inputs: BoundInputs, j_range: Iterable[int], paper_mode: bool = False
) -> tuple[float, int]:
    """Best data-dependent bound over piece budgets; returns (value, best_j).

    Ties go to the smallest j.  In paper_mode the estimation slack is the
    published 1/40 and the tail constant is written for a total budget of
    0.01 split evenly; otherwise both derive from inputs.delta split
    evenly between estimation and structural-risk terms.
    """
    js = sorted(set(j_range))
    if not js:
        raise ValueError("j_range is empty")
    best_val = math.inf
    best_j = -1
    for j in js:
        val = _srm_term(inputs, j, paper_mode)
        if val < best_val:
            best_val = val
            best_j = j
    return best_val, best_j


def baseline_bound(
    n_samples: int,
    j_star: int,
    delta_fixed: float = 0.005,
    est_slack: float = BASELINE_SLACK,
) -> float:
    """Non-adaptive bound at the exact piece count j* of the duals.

    Uses the verbatim published estimation slack by default; pass
    est_slack=hoeffding_slack(M, delta) to recompute it for another
    profile size.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    if j_star < 1:
        raise ValueError(f"j_star must be >= 1, got {j_star}")
    _check_delta(delta_fixed)
    return 2.0 * (est_slack + pwc_rad_bound(n_samples, j_star)) + 3.0 * math.sqrt(
        math.log(2.0 / delta_fixed) / (2.0 * n_samples)
    )


@dataclass(frozen=True)
class BoundRow:
    n_samples: int
    worst_case: float
    srm: float
    srm_best_j: int
    baseline: float


@dataclass(frozen=True)
class BoundCurve:
    """Bound values across a schedule of sample sizes N."""

    rows: tuple[BoundRow, ...]

    CSV_HEADER = "N,worst_case,srm,srm_best_j,baseline"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for row in self.rows:
            lines.append(
                f"{row.n_samples},{row.worst_case!r},{row.srm!r},"
                f"{row.srm_best_j},{row.baseline!r}"
            )
        return "\n".join(lines) + "\n"

    def reported(self) -> tuple[tuple[int, float], ...]:
        """The curve actually quoted: min(worst_case, srm) at each N."""
        return tuple((r.n_samples, min(r.worst_case, r.srm)) for r in self.rows)


def build_curve(
    e_hat: Mapping[int, float],
    m_profile: int,
    j_star: int,
    n_vars: int,
    kappa: int,
    n_schedule: Sequence[int],
    j_range: Iterable[int],
    delta: float = 0.01,
    paper_mode: bool = False,
) -> BoundCurve:
    if not n_schedule:
        raise ValueError("n_schedule is empty")
    js = tuple(j_range)
    rows = []
    base = BoundInputs(
        n_samples=int(n_schedule[0]),
        delta=delta,
        n_vars=n_vars,
        kappa=kappa,
        e_hat=dict(e_hat),
        m_profile=m_profile,
    )
    for n in n_schedule:
        inputs = replace(base, n_samples=int(n))
        srm_val, best_j = srm_bound(inputs, js, paper_mode=paper_mode)
        rows.append(
            BoundRow(
                n_samples=int(n),
                worst_case=worst_case_bound(int(n), n_vars, kappa, delta),
                srm=srm_val,
                srm_best_j=best_j,
                baseline=baseline_bound(int(n), j_star),
            )
        )
    return BoundCurve(tuple(rows))


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
