"""Exception types shared across the package.

Invalid arguments raise plain ValueError; the classes here cover failures
that are not the caller's fault.
"""


class NumericFailure(RuntimeError):
    """An underlying numerical routine (eigensolver) did not converge."""


class ResourceLimit(RuntimeError):
    """A computation was rejected because it would exceed a configured ceiling."""
