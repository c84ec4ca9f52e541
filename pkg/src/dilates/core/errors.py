from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from .pointset import PointSet


class DilatesError(Exception):
    """Base class for every error raised by the toolkit."""


class PointFileError(DilatesError, ValueError):
    """Malformed point-set file"""

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<input>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


class InvalidParameterError(DilatesError, ValueError):
    """A parameter is outside the range an operation accepts (q, d, N, n, matrices)."""


class DimensionMismatchError(InvalidParameterError):
    pass


class EmptySetError(InvalidParameterError):
    pass


class HypothesisError(DilatesError, ValueError):
    """The input violates the hypothesis of a lemma or theorem (rank < d, not reduced, ...)."""


class BudgetExceededError(DilatesError, RuntimeError):
    """Exhaustive search would examine more candidates than allowed."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"search needs {required} candidate subsets, budget is {budget} "
            f"(raise it with --budget or DILATE_BUDGET)"
        )


class TheoremViolation(DilatesError, AssertionError):
    """A proven bound failed on a concrete set. Carries the witness."""

    def __init__(self, message: str, witness: Optional["PointSet"] = None, q: Optional[int] = None):
        self.witness = witness
        self.q = q
        super().__init__(message)


class ArithmeticOverflowError(DilatesError, OverflowError):
    """A coordinate left the signed 64-bit range."""


class EmptySearchSpaceError(InvalidParameterError):
    """No rank-d subset of the requested size exists in the search space."""
