"""Exception types shared across the package."""


class ProcessDualityError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(ProcessDualityError):
    """Vector or row width does not match the ambient dimension."""


class EmptyProgramError(ProcessDualityError):
    """The program has no points at all (empty Omega or empty point list)."""


class EmptyFeasibleError(ProcessDualityError):
    """The feasible region at the requested z is empty."""


class SlaterMissing(ProcessDualityError):
    """No Slater point was supplied where one is required."""


class DegenerateFunctional(ProcessDualityError):
    """A separator with y* = 0 was used where a non-vertical one is required."""


class NotPointedError(ProcessDualityError):
    """A pointed order cone is required for the proper-efficiency notions."""


class NotMemberError(ProcessDualityError):
    """The reference point does not belong to the set under test."""


class NotInW0Error(NotMemberError):
    """The candidate y0 is not attained by any feasible point."""


class ProblemFormatError(ProcessDualityError):
    """A problem file failed validation; carries a field path diagnostic."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class InternalConsistencyError(ProcessDualityError):
    """An invariant the construction guarantees failed; an implementation bug."""
