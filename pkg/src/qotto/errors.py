"""Exception hierarchy shared across the package.

Two broad failure classes matter to callers: invalid inputs (DomainError,
CLI exit code 3) and computations that cannot be completed as requested
(ComputeError, CLI exit code 4).
"""


class DomainError(ValueError):
    """A parameter lies outside its physical or configured domain."""


class ResourceLimitError(DomainError):
    """A requested truncation depth exceeds the configured hard cap."""


class ComputeError(RuntimeError):
    """Base class for failures of a well-posed computation."""


class NonConvergenceError(ComputeError):
    """The certified tail bound was not met before the depth cap."""


class CyclePointError(ComputeError):
    """A thermal state at a named cycle point could not be built."""

    def __init__(self, point: str, message: str):
        self.point = point
        super().__init__(f"{point}: {message}")


class NoSignChangeError(ComputeError):
    """A root bracket was requested but the function does not change sign."""


class EmptyDomainError(ComputeError):
    """An optimization domain contains no admissible points."""
