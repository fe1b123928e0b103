"""Shared exception types.

The CLI maps these onto process exit codes, so every domain failure in the
package should raise one of them (or a plain ValueError for bad arguments).
"""


class DomainError(ValueError):
    """A point lies outside a function's domain."""


class ResourceLimitError(RuntimeError):
    """An exact computation was requested beyond its guarded size limit."""


class NumericalError(RuntimeError):
    """An iterative numeric routine failed to converge or lost precision."""
