"""Exception types shared across the package.

Plain ``ValueError`` is raised for ordinary argument validation; the classes
here mark failure modes callers may want to handle separately (infeasible
channel parameters, solver breakdowns).
"""


class CVKeyError(Exception):
    """Base class for all package-specific errors."""


class InfeasibleClonerError(CVKeyError, ValueError):
    """No entangling cloner reproduces the requested channel (T = 1 with excess noise)."""


class BracketError(CVKeyError, RuntimeError):
    """A root bracket has no sign change, so no zero crossing exists on it."""


class NoPositiveRegionError(CVKeyError, RuntimeError):
    """The key rate is not positive anywhere on the search domain."""


class NumericalError(CVKeyError, RuntimeError):
    """A numerical procedure failed: eigenvalue pairing, iteration cap, or root certification."""
