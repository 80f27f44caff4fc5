"""Exception hierarchy shared by every couplab module."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .core.ledger import IterationLedger


class CouplabError(Exception):
    """Base class for all couplab errors."""


class ContractViolationError(CouplabError, ValueError):
    """A caller broke a documented precondition (lengths, ranges, budgets)."""


class NumericError(CouplabError, ArithmeticError):
    """Non-finite numbers showed up where finite ones are required."""


class SingularJacobianError(NumericError):
    pass


class DivergenceError(NumericError):
    pass


class NewtonNonConvergenceError(CouplabError):
    def __init__(self, message: str, iterations: int, residual_norm: float) -> None:
        super().__init__(message)
        self.iterations = iterations
        self.residual_norm = residual_norm


class CouplingNonConvergenceError(CouplabError):
    """The coupling loop hit max_coupling_iters; the partial ledger is attached."""

    def __init__(self, message: str, ledger: IterationLedger, step: int) -> None:
        super().__init__(message)
        self.ledger = ledger
        self.step = step


class ConfigError(CouplabError):
    pass


class IncompleteGridError(CouplabError, ValueError):
    def __init__(self, missing: list[str]) -> None:
        super().__init__(f"Incomplete budget grid, missing cells: {', '.join(missing)}")
        self.missing = missing
