"""Exception types shared across the package."""


class EdgeDiffError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(EdgeDiffError):
    """Malformed edge-list input (bad token, self-loop, index out of range)."""


class SolverError(EdgeDiffError):
    """Noise-schedule solve failed or was given an infeasible problem."""


class DegenerateStateError(EdgeDiffError):
    """A sampling step reached a state its distribution cannot explain."""
