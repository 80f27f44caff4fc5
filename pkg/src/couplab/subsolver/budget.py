from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from ..errors import ContractViolationError


class BudgetKind(str, Enum):
    FINITE = "finite"
    UNTIL_CONVERGED = "until_converged"
    UNTIL_OUTPUT_STABLE = "until_output_stable"


@dataclass(frozen=True)
class NewtonBudget:
    """Per-call Newton allowance.

    Unbounded kinds are still capped by the solver's max_newton_per_call.
    """

    kind: BudgetKind
    n: int | None = None
    eps_cid: float | None = None

    def __post_init__(self) -> None:
        if self.kind is BudgetKind.FINITE and (self.n is None or self.n < 1):
            raise ContractViolationError("Finite budget needs n >= 1")
        if self.kind is BudgetKind.UNTIL_OUTPUT_STABLE and not (self.eps_cid and self.eps_cid > 0):
            raise ContractViolationError("UntilOutputStable budget needs eps_cid > 0")

    @classmethod
    def finite(cls, n: int) -> NewtonBudget:
        return cls(BudgetKind.FINITE, n=n)

    @classmethod
    def until_converged(cls) -> NewtonBudget:
        return cls(BudgetKind.UNTIL_CONVERGED)

    @classmethod
    def until_output_stable(cls, eps_cid: float) -> NewtonBudget:
        return cls(BudgetKind.UNTIL_OUTPUT_STABLE, eps_cid=eps_cid)

    @classmethod
    def from_count(cls, n: int | float) -> NewtonBudget:
        """Map a grid value (positive int or math.inf) to a budget."""
        if isinstance(n, float) and math.isinf(n):
            return cls.until_converged()
        return cls.finite(int(n))

    def allowance(self, cap: int) -> int:
        if self.kind is BudgetKind.FINITE:
            return min(int(self.n or 0), cap)
        return cap

    def __str__(self) -> str:
        if self.kind is BudgetKind.FINITE:
            return f"Finite({self.n})"
        if self.kind is BudgetKind.UNTIL_CONVERGED:
            return "UntilConverged"
        return f"UntilOutputStable({self.eps_cid:g})"
