"""Tools for sizing branch-and-bound configuration experiments.

The package measures how well small piecewise-constant surrogates track a
solver's parameter-to-performance curves, and turns those measurements into
data-dependent generalization bounds that can be compared against the
worst-case alternative.
"""

__version__ = "0.1.0"

from .errors import DomainError, NumericalError, ResourceLimitError
from .piecewise import PiecewiseConstant, common_refinement, linf_distance, lp_distance

__all__ = [
    "DomainError",
    "NumericalError",
    "ResourceLimitError",
    "PiecewiseConstant",
    "common_refinement",
    "linf_distance",
    "lp_distance",
    "__version__",
]
