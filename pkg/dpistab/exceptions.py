"""Exceptions raised by dpistab."""


class DPIStabError(Exception):
    """Base class for every dpistab failure."""


class DomainError(DPIStabError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConvergenceDomainError(DomainError):
    """Explicit amplitudes only converge for abs(r) < 1."""


class CapacityError(DPIStabError):
    """The requested order exceeds the configured maximum."""


class SingularityError(DPIStabError, ZeroDivisionError):
    """Pole of the stability number at r == 1."""


class DivergenceError(DPIStabError):
    """A series was requested outside its radius of convergence."""


class SingularStepError(DPIStabError):
    """An implicit update hit a (numerically) zero pivot."""

    def __init__(self, pivot: float, iteration: int):
        super().__init__(f"pivot {pivot!r} vanished at iteration {iteration}")
        self.pivot = pivot
        self.iteration = iteration


class ScanRangeError(DPIStabError):
    """A bisection bracket does not contain a stability edge."""
