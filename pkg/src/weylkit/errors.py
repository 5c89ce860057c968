"""Exception types shared across weylkit."""


class WeylkitError(Exception):
    """Base class for library errors."""


class DeformationError(WeylkitError, ValueError):
    """An operation that only makes sense for the undeformed relation got q != 1."""


class ModeError(WeylkitError, ValueError):
    """A letter refers to a mode outside the declared mode count."""


class BoundExceeded(WeylkitError, ValueError):
    """An exponential enumeration was asked to exceed its configured bound."""

    def __init__(self, what: str, size: int, bound: int):
        super().__init__(f"{what}: size {size} exceeds the configured bound {bound}")
        self.what = what
        self.size = size
        self.bound = bound


class SeriesError(WeylkitError, ValueError):
    """Precondition failure on a truncated series (bad constant term, etc.)."""


class DomainError(WeylkitError, ValueError):
    """Index or parameter outside the domain of a number family."""
