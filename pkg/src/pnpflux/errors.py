"""Exception taxonomy.

Two families: value errors raised by model formulas when an input leaves
the formula's domain, and runtime errors raised by the numerical solvers.
Solvers treat DomainError as "bad trial point" (shrink and retry), while
DegenerateError marks a structurally-zero divisor the caller should skip
rather than retry.
"""


class DomainError(ValueError):
    """A formula was evaluated outside its domain (log/denominator guard)."""


class DegenerateError(ValueError):
    """Division by a quantity that is structurally zero at this input."""


class RangeError(ValueError):
    """Argument outside its admissible interval."""


class ProfileError(ValueError):
    """Malformed tabulated-profile input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NoBracketError(RuntimeError):
    """Endpoint function values do not straddle zero."""


class MaxIterError(RuntimeError):
    """Iteration budget exhausted before meeting the tolerance."""


class SingularJacobianError(RuntimeError):
    """Jacobian numerically singular and the gradient step stalls."""


class NoSolutionError(RuntimeError):
    """A solve that must produce a root found none."""
