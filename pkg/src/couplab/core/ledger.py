from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ContractViolationError
from .tolerances import CostModel


@dataclass(frozen=True)
class CouplingRecord:
    newton_iters_a: int
    newton_iters_b: int
    change_a: float
    change_b: float
    residual_a: float = 0.0
    residual_b: float = 0.0


@dataclass
class StepRecord:
    index: int
    time: float
    iterations: list[CouplingRecord] = field(default_factory=list)
    converged: bool = False

    @property
    def n_coupling(self) -> int:
        return len(self.iterations)

    @property
    def newton_a(self) -> int:
        return sum(r.newton_iters_a for r in self.iterations)

    @property
    def newton_b(self) -> int:
        return sum(r.newton_iters_b for r in self.iterations)


class IterationLedger:
    """Per time step, per coupling iteration record of Newton counts.

    Running totals are maintained on every ``record`` call; ``verify`` recomputes
    them from the records.
    """

    def __init__(self) -> None:
        self.steps: list[StepRecord] = []
        self.n_coupling = 0
        self.newton_a_total = 0
        self.newton_b_total = 0
        self._open: StepRecord | None = None

    @property
    def newton_total(self) -> int:
        return self.newton_a_total + self.newton_b_total

    @property
    def converged_steps(self) -> int:
        return sum(1 for s in self.steps if s.converged)

    def open_step(self, index: int, time: float) -> StepRecord:
        if self._open is not None:
            raise ContractViolationError(f"Step {self._open.index} is still open")
        self._open = StepRecord(index=index, time=time)
        self.steps.append(self._open)
        return self._open

    def record(self, rec: CouplingRecord) -> None:
        if self._open is None:
            raise ContractViolationError("No open step to record into")
        if rec.newton_iters_a < 0 or rec.newton_iters_b < 0:
            raise ContractViolationError("Newton counts must be non-negative")
        self._open.iterations.append(rec)
        self.n_coupling += 1
        self.newton_a_total += rec.newton_iters_a
        self.newton_b_total += rec.newton_iters_b

    def close_step(self, converged: bool) -> StepRecord:
        if self._open is None:
            raise ContractViolationError("No open step to close")
        step = self._open
        step.converged = converged
        self._open = None
        return step

    def current_step(self) -> StepRecord | None:
        return self._open

    def verify(self) -> bool:
        return (
            self.n_coupling == sum(s.n_coupling for s in self.steps)
            and self.newton_a_total == sum(s.newton_a for s in self.steps)
            and self.newton_b_total == sum(s.newton_b for s in self.steps)
        )


def estimate_cost(ledger: IterationLedger, model: CostModel) -> float:
    return (
        ledger.n_coupling * model.cost_transfer
        + ledger.newton_a_total * model.cost_newton_a
        + ledger.newton_b_total * model.cost_newton_b
    )
