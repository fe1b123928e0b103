"""Branch-and-bound solver for binary integer programs with scored branching."""

from .bnb import BnbConfig, BnbResult, branch_and_bound, branch_scores, rule_score
from .ip import IntegerProgram, Row
from .lp import LpResult, solve_lp

__all__ = [
    "IntegerProgram",
    "Row",
    "LpResult",
    "solve_lp",
    "BnbConfig",
    "BnbResult",
    "branch_and_bound",
    "branch_scores",
    "rule_score",
]
