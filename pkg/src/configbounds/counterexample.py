"""A function family that is well approximated in L^p yet maximally rich.

The family f_r(x) = (1 + cos(rx)) / 2 over parameters r in (0, t], with
t = gamma^p and examples x >= 1 / (2 gamma^p), sits within L^p-distance
gamma of the constant 1/2 on every example, yet an explicit sample drives
its empirical Rademacher complexity as close to 1/2 as desired.  This
module builds that sample, constructs the witnessing parameter r0 for every
sign vector, and verifies each inequality numerically.

Phases r0 * x_i are dyadic rationals times pi.  They are reduced modulo 2
with exact integer arithmetic before any cosine is taken: at the sample's
scale a direct float product is wrong by many radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, NumericalError, ResourceLimitError
from .rademacher import empirical_rad_exact

__all__ = [
    "CosineFamily",
    "AdversarialSample",
    "family_eval",
    "lp_approx_error",
    "linf_gap_from_half",
    "adversarial_alpha",
    "adversarial_r0",
    "rad_lower_demo",
    "suite_report",
]

_REL_TOL = 1e-8
_PANEL_CAP = 2**21
_DIRECT_PANEL_LIMIT = 2**13
_DEMO_MAX_N = 16
_CHECK_SLACK = 1e-12


@dataclass(frozen=True)
class CosineFamily:
    """Parameters of the family f_r(x) = (1 + cos(rx)) / 2.

    gamma in (0, 1/4) is the approximation level, p >= 1 the norm index.
    Parameters live in (0, t] with t = gamma^p; examples in [1/(2t), inf).
    """

    gamma: float
    p: float

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma < 0.25:
            raise DomainError(f"gamma must lie in (0, 1/4), got {self.gamma}")
        if not self.p >= 1.0:
            raise DomainError(f"norm index p must be at least 1, got {self.p}")

    @property
    def t(self) -> float:
        return self.gamma**self.p

    @property
    def x_min(self) -> float:
        return 1.0 / (2.0 * self.t)


def family_eval(fam: CosineFamily, r: float, x: float) -> float:
    """Direct evaluation of f_r(x); accurate while r * x is moderate."""
    if not 0.0 < r <= fam.t:
        raise DomainError(f"parameter r={r} outside (0, {fam.t}]")
    if x < fam.x_min:
        raise DomainError(f"example x={x} below the domain floor {fam.x_min}")
    return 0.5 * (1.0 + math.cos(r * x))


def _composite_simpson(
    f: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int
) -> float:
    xs = np.linspace(a, b, panels + 1)
    ys = f(xs)
    s = ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()
    return float(s * (b - a) / (3.0 * panels))


def _simpson_to_tolerance(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    start_panels: int,
    context: str,
) -> float:
    panels = max(8, start_panels)
    panels += panels % 2
    prev = _composite_simpson(f, a, b, panels)
    while True:
        panels *= 2
        if panels > _PANEL_CAP:
            raise NumericalError(
                f"quadrature for {context} did not converge within "
                f"{_PANEL_CAP} panels (last delta {abs(prev):.3e} scale)"
            )
        cur = _composite_simpson(f, a, b, panels)
        if abs(cur - prev) <= _REL_TOL * max(abs(cur), 1e-300):
            return cur
        prev = cur


def _abs_cos_pow_period(p: float) -> float:
    """Integral of |cos u|^p over one half-period [0, pi]."""
    return math.sqrt(math.pi) * math.gamma((p + 1.0) / 2.0) / math.gamma(p / 2.0 + 1.0)


def lp_approx_error(fam: CosineFamily, x: float, method: str = "auto") -> float:
    """L^p distance on (0, t] between the dual at ``x`` and the constant 1/2.

    Equals (integral of |cos(rx)/2|^p dr over (0, t])^(1/p).  For p = 2 a
    closed form is available: sqrt(2t + sin(2tx)/x) / 4.  The quadrature
    path resolves every oscillation: direct composite Simpson with at least
    4 * ceil(tx / pi) panels while that stays small, otherwise the integrand
    is folded over its period pi/x (full periods integrate in closed form,
    the partial tail by Simpson), which keeps any x reachable.
    """
    if x < fam.x_min:
        raise DomainError(f"example x={x} below the domain floor {fam.x_min}")
    if method not in ("auto", "closed", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    t = fam.t
    p = fam.p
    if method == "closed" or (method == "auto" and p == 2.0):
        if p != 2.0:
            raise DomainError("closed form only exists for p = 2")
        return 0.25 * math.sqrt(2.0 * t + math.sin(2.0 * t * x) / x)
    oscillations = t * x / math.pi
    floor_panels = 4 * math.ceil(oscillations)
    if floor_panels <= _DIRECT_PANEL_LIMIT:

        def g(r: np.ndarray) -> np.ndarray:
            return np.abs(0.5 * np.cos(r * x)) ** p

        integral = _simpson_to_tolerance(
            g, 0.0, t, floor_panels, f"lp_approx_error(p={p}, x={x})"
        )
    else:
        k = math.floor(oscillations)
        w = t * x - k * math.pi

        def h(u: np.ndarray) -> np.ndarray:
            return np.abs(np.cos(u)) ** p

        tail = 0.0
        if w > 1e-15:
            tail = _simpson_to_tolerance(
                h, 0.0, w, 8, f"lp_approx_error tail(p={p}, x={x})"
            )
        integral = (0.5**p) * (k * _abs_cos_pow_period(p) + tail) / x
    return integral ** (1.0 / p)


def linf_gap_from_half(fam: CosineFamily, x: float) -> float:
    """Largest |f_r(x) - 1/2| over r in (0, t], grid plus critical points.

    Whenever t * x >= pi the parameter r = pi / x lands inside the range and
    the gap is exactly 1/2.  Below that the supremum 1/2 is approached but
    not attained as r -> 0; a grid maximum is returned.
    """
    if x < fam.x_min:
        raise DomainError(f"example x={x} below the domain floor {fam.x_min}")
    t = fam.t
    if t * x >= math.pi:
        return 0.5
    rs = np.linspace(t / 1024.0, t, 1024)
    return float(np.max(np.abs(0.5 * np.cos(rs * x))))


def adversarial_alpha(c: float) -> float:
    """Largest power of 1/2 strictly below the construction's admissibility bound.

    The bound is min(1/(2 pi + 1), arccos(2c) / (pi + arccos(2c))): the first
    part keeps every witness parameter inside (0, t], the second makes each
    cosine clear level c.  For c = 0.45 this gives 1/8.
    """
    if not 0.0 < c < 0.5:
        raise DomainError(f"level c must lie in (0, 1/2), got {c}")
    acos = math.acos(2.0 * c)
    bound = min(1.0 / (2.0 * math.pi + 1.0), acos / (math.pi + acos))
    m = 1
    while 2.0**-m >= bound:
        m += 1
    return 2.0**-m


@dataclass(frozen=True)
class AdversarialSample:
    """Geometric sample x_i = alpha^(-i) / (2t) driving the complexity to 1/2."""

    fam: CosineFamily
    n: int
    c: float
    alpha: float
    points: tuple[float, ...]

    def __init__(self, fam: CosineFamily, n: int, c: float) -> None:
        if n < 1:
            raise DomainError("sample size must be positive")
        alpha = adversarial_alpha(c)
        scale = 1.0 / (2.0 * fam.t)
        points = tuple(scale * alpha**-i for i in range(1, n + 1))
        assert all(x >= scale for x in points)
        object.__setattr__(self, "fam", fam)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "points", points)

    @property
    def alpha_log2(self) -> int:
        """Exponent m with alpha = 2^-m."""
        return round(-math.log2(self.alpha))


def _dyadic_f_values(sample: AdversarialSample, b_bits: int) -> list[float]:
    """f_{r0}(x_i) for all i, with the phase reduced mod 2 pi in exact integers.

    Bit j - 1 of ``b_bits`` is b_j (set means sigma_j = -1).  The phase at
    x_i is pi * P / Q_i with P = sum_j b_j 2^(m (N + 1 - j)) + 1 and
    Q_i = 2^(m (N + 1 - i)); P mod 2 Q_i is exact, so the cosine argument
    carries no accumulated rounding no matter how large x_i is.
    """
    n = sample.n
    m = sample.alpha_log2
    p_int = 1
    for j in range(1, n + 1):
        if (b_bits >> (j - 1)) & 1:
            p_int += 1 << (m * (n + 1 - j))
    values = []
    for i in range(1, n + 1):
        q = 1 << (m * (n + 1 - i))
        rem = p_int % (2 * q)
        values.append(0.5 * (1.0 + math.cos(math.pi * (rem / q))))
    return values


def _check_sigma_inequalities(
    sample: AdversarialSample, b_bits: int, values: Sequence[float]
) -> None:
    c = sample.c
    for i, f in enumerate(values, start=1):
        if (b_bits >> (i - 1)) & 1:
            ok = f <= 0.5 - c + _CHECK_SLACK
        else:
            ok = f >= 0.5 + c - _CHECK_SLACK
        if not ok:
            raise NumericalError(
                f"witness inequality failed at i={i}: f={f}, c={c}, "
                f"alpha={sample.alpha} (alpha bound violated)"
            )


def _r0_value(sample: AdversarialSample, b_bits: int) -> float:
    fam = sample.fam
    acc = sample.alpha ** (sample.n + 1)
    for j in range(1, sample.n + 1):
        if (b_bits >> (j - 1)) & 1:
            acc += sample.alpha**j
    return 2.0 * math.pi * fam.t * acc


def adversarial_r0(sample: AdversarialSample, sigma: Sequence[int]) -> float:
    """Witness parameter for one sign vector: every sigma_i f_{r0}(x_i) is large.

    b_i = 0 when sigma_i = +1 and 1 when sigma_i = -1; then
    r0 = 2 pi t (sum_j alpha^j b_j + alpha^(N+1)) lies in (0, t] and satisfies
    sigma_i (f_{r0}(x_i) - 1/2) >= c for every i, which is checked here and
    raises if violated.
    """
    if len(sigma) != sample.n:
        raise DomainError(f"sigma has length {len(sigma)}, expected {sample.n}")
    b_bits = 0
    for i, s in enumerate(sigma):
        if s == -1:
            b_bits |= 1 << i
        elif s != 1:
            raise DomainError(f"sigma entries must be +1 or -1, got {s}")
    values = _dyadic_f_values(sample, b_bits)
    _check_sigma_inequalities(sample, b_bits, values)
    r0 = _r0_value(sample, b_bits)
    assert 0.0 < r0 <= sample.fam.t
    return r0


def rad_lower_demo(fam: CosineFamily, n: int, c: float) -> float:
    """Exhaustively averaged correlation of the family with every sign vector.

    Runs the witness construction for all 2^n sign vectors and returns
    (1/n) 2^-n sum_sigma sum_i sigma_i f_{r0(sigma)}(x_i), a certified lower
    bound on the empirical Rademacher complexity that lands in [c, 1/2].
    Every per-sigma inequality is verified along the way.
    """
    if n > _DEMO_MAX_N:
        raise ResourceLimitError(
            f"exhaustive demo enumerates 2^n sign vectors; n={n} exceeds {_DEMO_MAX_N}"
        )
    if n < 1:
        raise DomainError("sample size must be positive")
    sample = AdversarialSample(fam, n, c)
    total = 0.0
    for b_bits in range(1 << n):
        values = _dyadic_f_values(sample, b_bits)
        _check_sigma_inequalities(sample, b_bits, values)
        corr = 0.0
        for i, f in enumerate(values):
            corr += -f if (b_bits >> i) & 1 else f
        total += corr
    return total / (1 << n) / n


def suite_report(
    gammas: Iterable[float],
    ps: Iterable[float],
    ns: Iterable[int],
    cs: Iterable[float],
) -> dict[str, Any]:
    """Run the full verification suite and report every check's outcome.

    For each (gamma, p): L^p approximation errors against the constant 1/2
    at the adversarial sample's points (all must be < gamma) and the
    sup-norm gap at those points (must be 1/2 up to 1e-6).  For each (n, c):
    the exhaustive complexity demo (must land in [c, 1/2]).  The constant
    class itself has complexity exactly 0 on the same sample shape.
    """
    gammas = [float(g) for g in gammas]
    ps = [float(p) for p in ps]
    ns = [int(n) for n in ns]
    cs = [float(c) for c in cs]
    if not gammas or not ps or not ns or not cs:
        raise DomainError("gammas, ps, ns, and cs must all be nonempty")
    n_ref = max(ns)
    c_ref = cs[0]
    approx = []
    gaps = []
    for gamma in gammas:
        for p in ps:
            fam = CosineFamily(gamma, p)
            sample = AdversarialSample(fam, n_ref, c_ref)
            xs = (fam.x_min,) + sample.points
            errors = [
                {"x": x, "error": lp_approx_error(fam, x)} for x in xs
            ]
            max_err = max(e["error"] for e in errors)
            approx.append(
                {
                    "gamma": gamma,
                    "p": p,
                    "errors": errors,
                    "max_error": max_err,
                    "pass": max_err < gamma,
                }
            )
            min_gap = min(linf_gap_from_half(fam, x) for x in sample.points)
            gaps.append(
                {
                    "gamma": gamma,
                    "p": p,
                    "min_gap": min_gap,
                    "pass": min_gap >= 0.5 - 1e-6,
                }
            )
    fam_ref = CosineFamily(gammas[0], ps[0])
    demos = []
    for n in ns:
        for c in cs:
            value = rad_lower_demo(fam_ref, n, c)
            demos.append(
                {
                    "n": n,
                    "c": c,
                    "alpha": adversarial_alpha(c),
                    "value": value,
                    "pass": c <= value <= 0.5,
                }
            )
    constant_rad = empirical_rad_exact(np.full((1, n_ref), 0.5))
    all_pass = (
        all(entry["pass"] for entry in approx)
        and all(entry["pass"] for entry in gaps)
        and all(entry["pass"] for entry in demos)
        and constant_rad == 0.0
    )
    return {
        "approx": approx,
        "linf_gap": gaps,
        "demos": demos,
        "constant_class_rad": constant_rad,
        "all_pass": all_pass,
    }
