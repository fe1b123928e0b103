"""LP relaxation solver: two-phase revised simplex with bounded variables.

Structural variables live in ``[0, 1]``, slacks in ``[0, inf)``, and phase-1
artificials are added only for rows with a negative right-hand side.  The
pivot loop runs under numba; Dantzig pricing switches to Bland's rule after a
run of degenerate steps so cycling cannot occur.  Results are deterministic:
ties in pricing and in the ratio test resolve to the smallest index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from numba import njit

from ..errors import DomainError, NumericalError
from .ip import IntegerProgram

__all__ = ["LpResult", "solve_lp"]

_FEAS_TOL = 1e-7
_OPT_TOL = 1e-9
_PIVOT_TOL = 1e-11
_DEGEN_LIMIT = 40
_REFRESH_EVERY = 128

_OPTIMAL = 0
_INFEASIBLE = 1
_NUMERIC_FAIL = 2


@dataclass(frozen=True)
class LpResult:
    """Outcome of one LP solve.

    ``status`` is "optimal" or "infeasible".  For optimal results ``x`` holds
    the full-length point (fixed coordinates included) and ``value`` the
    objective at ``x``; both are None otherwise.
    """

    status: str
    value: float | None
    x: np.ndarray | None


_LP_INFEASIBLE = LpResult("infeasible", None, None)


@njit(cache=True, nogil=True)
def _refresh(w, b, upper, basis, vstat, xval, binv):  # pragma: no cover
    m, t = w.shape
    bmat = np.empty((m, m))
    for i in range(m):
        col = basis[i]
        for k in range(m):
            bmat[k, i] = w[k, col]
    binv[:, :] = np.linalg.inv(bmat)
    r = b.copy()
    for j in range(t):
        if vstat[j] == 1 and upper[j] != 0.0:
            u = upper[j]
            for k in range(m):
                r[k] -= w[k, j] * u
    xb = binv @ r
    for i in range(m):
        xval[basis[i]] = xb[i]


@njit(cache=True, nogil=True)
def _optimize(w, b, obj, upper, basis, vstat, xval, binv, t_scan):  # pragma: no cover
    """Run primal simplex for one objective; returns a status code."""
    m, t = w.shape
    max_iter = 200 * (m + t) + 2000
    degen = 0
    for it in range(1, max_iter + 1):
        if it % _REFRESH_EVERY == 0:
            _refresh(w, b, upper, basis, vstat, xval, binv)
        # simplex multipliers y = obj_B @ binv
        y = np.zeros(m)
        for i in range(m):
            ob = obj[basis[i]]
            if ob != 0.0:
                for k in range(m):
                    y[k] += ob * binv[i, k]
        bland = degen >= _DEGEN_LIMIT
        enter = -1
        best = _OPT_TOL
        for j in range(t_scan):
            if vstat[j] == 2 or upper[j] == 0.0:
                continue
            d = obj[j]
            for k in range(m):
                d -= y[k] * w[k, j]
            viol = d if vstat[j] == 0 else -d
            if viol > _OPT_TOL:
                if bland:
                    enter = j
                    break
                if viol > best:
                    best = viol
                    enter = j
        if enter < 0:
            return _OPTIMAL
        # direction of basic values as `enter` moves by theta toward its
        # opposite bound: xB -= sign * (binv @ w_enter) * theta
        sign = 1.0 if vstat[enter] == 0 else -1.0
        col = np.zeros(m)
        for i in range(m):
            acc = 0.0
            for k in range(m):
                acc += binv[i, k] * w[k, enter]
            col[i] = acc
        theta = upper[enter]  # bound-flip cap, may be inf
        leave = -1
        leave_to = 0
        for i in range(m):
            delta = -sign * col[i]
            bi = basis[i]
            if delta > _PIVOT_TOL:
                ub = upper[bi]
                if ub == np.inf:
                    continue
                ti = (ub - xval[bi]) / delta
                to = 1
            elif delta < -_PIVOT_TOL:
                ti = xval[bi] / (-delta)
                to = 0
            else:
                continue
            if ti < 0.0:
                ti = 0.0
            if leave < 0:
                if ti < theta:
                    theta = ti
                    leave = i
                    leave_to = to
            elif ti < theta - 1e-12:
                theta = ti
                leave = i
                leave_to = to
            elif ti <= theta + 1e-12 and basis[i] < basis[leave]:
                if ti < theta:
                    theta = ti
                leave = i
                leave_to = to
        if theta == np.inf:
            return _NUMERIC_FAIL
        degen = degen + 1 if theta <= 1e-12 else 0
        xval[enter] += sign * theta
        for i in range(m):
            xval[basis[i]] -= sign * col[i] * theta
        if leave < 0:
            # bound flip: snap exactly onto the opposite bound
            if vstat[enter] == 0:
                vstat[enter] = 1
                xval[enter] = upper[enter]
            else:
                vstat[enter] = 0
                xval[enter] = 0.0
            continue
        out = basis[leave]
        vstat[out] = leave_to
        xval[out] = upper[out] if leave_to == 1 else 0.0
        basis[leave] = enter
        vstat[enter] = 2
        piv = col[leave]
        inv_p = 1.0 / piv
        for k in range(m):
            binv[leave, k] *= inv_p
        for i in range(m):
            if i != leave and col[i] != 0.0:
                f = col[i]
                for k in range(m):
                    binv[i, k] -= f * binv[leave, k]
    return _NUMERIC_FAIL


@njit(cache=True, nogil=True)
def _simplex_kernel(a, b, c):  # pragma: no cover
    """Maximize c @ x s.t. a @ x <= b, 0 <= x <= 1.

    Returns (status, value, x) with status 0 optimal, 1 infeasible,
    2 numeric failure.
    """
    m, n = a.shape
    n_art = 0
    for k in range(m):
        if b[k] < 0.0:
            n_art += 1
    t = n + m + n_art
    w = np.zeros((m, t))
    for k in range(m):
        for j in range(n):
            w[k, j] = a[k, j]
        w[k, n + k] = 1.0
    upper = np.empty(t)
    for j in range(n):
        upper[j] = 1.0
    for j in range(n, t):
        upper[j] = np.inf
    basis = np.empty(m, dtype=np.int64)
    vstat = np.zeros(t, dtype=np.int8)
    xval = np.zeros(t)
    binv = np.eye(m)
    ai = n + m
    for k in range(m):
        if b[k] < 0.0:
            w[k, ai] = -1.0
            basis[k] = ai
            xval[ai] = -b[k]
            binv[k, k] = -1.0  # basis column is -e_k, so its inverse row flips
            ai += 1
        else:
            basis[k] = n + k
            xval[n + k] = b[k]
        vstat[basis[k]] = 2
    if n_art > 0:
        obj1 = np.zeros(t)
        for j in range(n + m, t):
            obj1[j] = -1.0
        code = _optimize(w, b, obj1, upper, basis, vstat, xval, binv, t)
        if code != _OPTIMAL:
            return code, 0.0, np.zeros(n)
        infeas = 0.0
        for j in range(n + m, t):
            infeas += xval[j]
        if infeas > _FEAS_TOL:
            return _INFEASIBLE, 0.0, np.zeros(n)
        # lock artificials at zero; any still basic sit degenerate at 0
        for j in range(n + m, t):
            upper[j] = 0.0
            if vstat[j] != 2:
                xval[j] = 0.0
    obj2 = np.zeros(t)
    for j in range(n):
        obj2[j] = c[j]
    code = _optimize(w, b, obj2, upper, basis, vstat, xval, binv, n + m)
    if code != _OPTIMAL:
        return code, 0.0, np.zeros(n)
    _refresh(w, b, upper, basis, vstat, xval, binv)
    x = np.empty(n)
    for j in range(n):
        v = xval[j]
        if v < 0.0:
            v = 0.0
        elif v > 1.0:
            v = 1.0
        x[j] = v
    value = 0.0
    for j in range(n):
        value += c[j] * x[j]
    return _OPTIMAL, value, x


def _solve_dense(
    a: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    fixings: Mapping[int, int] | None = None,
) -> LpResult:
    """Hot-path entry used by branch and bound; inputs must be validated."""
    n = c.size
    if fixings:
        items = sorted(fixings.items())
        fixed_idx = np.array([i for i, _ in items], dtype=np.int64)
        fixed_val = np.array([float(v) for _, v in items])
        free = np.ones(n, dtype=bool)
        free[fixed_idx] = False
        a_f = np.ascontiguousarray(a[:, free])
        b_f = b - a[:, fixed_idx] @ fixed_val
        c_f = np.ascontiguousarray(c[free])
    else:
        fixed_idx = np.empty(0, dtype=np.int64)
        fixed_val = np.empty(0)
        free = np.ones(n, dtype=bool)
        a_f = np.ascontiguousarray(a)
        b_f = np.asarray(b, dtype=np.float64)
        c_f = np.ascontiguousarray(c, dtype=np.float64)
    x_full = np.zeros(n)
    x_full[fixed_idx] = fixed_val
    if a_f.shape[1] == 0:
        if b_f.size and b_f.min() < -_FEAS_TOL:
            return _LP_INFEASIBLE
        return LpResult("optimal", float(c @ x_full), x_full)
    if a_f.shape[0] == 0:
        x_full[free] = (c_f > 0.0).astype(np.float64)
        return LpResult("optimal", float(c @ x_full), x_full)
    try:
        status, _, x_f = _simplex_kernel(a_f, b_f, c_f)
    except Exception as exc:  # singular refresh basis
        raise NumericalError(f"simplex basis refresh failed: {exc}") from exc
    if status == _INFEASIBLE:
        return _LP_INFEASIBLE
    if status != _OPTIMAL:
        raise NumericalError("simplex did not converge")
    x_full[free] = x_f
    return LpResult("optimal", float(c @ x_full), x_full)


def solve_lp(ip: IntegerProgram, fixings: Mapping[int, int] | None = None) -> LpResult:
    """Solve the LP relaxation of ``ip`` with optional 0/1 variable fixings.

    ``fixings`` maps variable index to 0 or 1; fixed columns are substituted
    out before the simplex runs, which is what makes node LPs cheap and lets
    results be cached by the fixing set alone.
    """
    if fixings:
        for i, v in fixings.items():
            if not 0 <= int(i) < ip.n:
                raise DomainError(f"fixed variable {i} out of range")
            if v not in (0, 1):
                raise DomainError(f"fixing for variable {i} must be 0 or 1, got {v}")
        if len(fixings) != len(set(int(i) for i in fixings)):
            raise DomainError("duplicate fixed variable")
    a, b = ip.dense()
    return _solve_dense(a, b, ip.objective(), fixings)
