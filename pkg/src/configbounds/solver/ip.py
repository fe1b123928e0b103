"""Binary integer programs in sparse row form.

An instance is ``max c @ z`` subject to ``A @ z <= b`` with every variable
boxed in ``[0, 1]`` and the variables listed in ``binary`` required to be
integral.  Rows are stored sparsely because the intended workload
(set-packing style instances) touches few variables per constraint.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

import numpy as np

from ..errors import DomainError

__all__ = ["Row", "IntegerProgram"]


@dataclass(frozen=True)
class Row:
    """One constraint ``sum(coef[k] * z[idx[k]]) <= b`` in sparse form."""

    idx: tuple[int, ...]
    coef: tuple[float, ...]
    b: float

    def __init__(self, idx: Iterable[int], coef: Iterable[float], b: float) -> None:
        idx_t = tuple(int(i) for i in idx)
        coef_t = tuple(float(v) for v in coef)
        if len(idx_t) != len(coef_t):
            raise DomainError("row idx and coef must have equal length")
        if len(set(idx_t)) != len(idx_t):
            raise DomainError("row indices must be distinct")
        b_f = float(b)
        if not math.isfinite(b_f) or not all(math.isfinite(v) for v in coef_t):
            raise DomainError("row coefficients and bound must be finite")
        object.__setattr__(self, "idx", idx_t)
        object.__setattr__(self, "coef", coef_t)
        object.__setattr__(self, "b", b_f)


@dataclass(frozen=True)
class IntegerProgram:
    """``max c @ z`` s.t. ``A @ z <= b``, ``0 <= z <= 1``, ``z[binary]`` integral."""

    n: int
    c: tuple[float, ...]
    rows: tuple[Row, ...]
    binary: tuple[int, ...]

    def __init__(
        self,
        n: int,
        c: Iterable[float],
        rows: Iterable[Row],
        binary: Iterable[int],
    ) -> None:
        n_i = int(n)
        if n_i < 1:
            raise DomainError("need at least one variable")
        c_t = tuple(float(v) for v in c)
        if len(c_t) != n_i:
            raise DomainError(f"objective has {len(c_t)} entries, expected {n_i}")
        if not all(math.isfinite(v) for v in c_t):
            raise DomainError("objective coefficients must be finite")
        rows_t = tuple(rows)
        for row in rows_t:
            if not isinstance(row, Row):
                raise DomainError("rows must be Row instances")
            if row.idx and (min(row.idx) < 0 or max(row.idx) >= n_i):
                raise DomainError("row index out of range")
        bin_t = tuple(sorted({int(i) for i in binary}))
        if bin_t and (bin_t[0] < 0 or bin_t[-1] >= n_i):
            raise DomainError("binary index out of range")
        object.__setattr__(self, "n", n_i)
        object.__setattr__(self, "c", c_t)
        object.__setattr__(self, "rows", rows_t)
        object.__setattr__(self, "binary", bin_t)

    @property
    def m(self) -> int:
        return len(self.rows)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """Constraint data as a dense (A, b) pair of float64 arrays."""
        a = np.zeros((self.m, self.n))
        b = np.empty(self.m)
        for k, row in enumerate(self.rows):
            b[k] = row.b
            for i, v in zip(row.idx, row.coef):
                a[k, i] = v
        return a, b

    def objective(self) -> np.ndarray:
        return np.asarray(self.c, dtype=np.float64)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "c": list(self.c),
            "rows": [
                {"idx": list(r.idx), "coef": list(r.coef), "b": r.b}
                for r in self.rows
            ],
            "binary": list(self.binary),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "IntegerProgram":
        try:
            rows = tuple(
                Row(r["idx"], r["coef"], r["b"]) for r in data["rows"]
            )
            ip = cls(data["n"], data["c"], rows, data["binary"])
            declared_m = int(data["m"])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed integer program: {exc}") from exc
        if declared_m != ip.m:
            raise DomainError(
                f"declared m={declared_m} but {ip.m} rows present"
            )
        return ip

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "IntegerProgram":
        return cls.from_dict(json.loads(text))
