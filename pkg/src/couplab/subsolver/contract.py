"""
Black-box sub-solver contract and the Newton-backed implementation used by the
model problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from ..core.interface import InterfaceField
from ..errors import ContractViolationError
from ..models.base import CoupledProblem, FieldKernel, StepContext
from .budget import NewtonBudget
from .newton import newton_solve


@dataclass
class SolverCallReport:
    newton_iters: int
    residual_norm: float
    single_field_converged: bool
    output: InterfaceField
    stop_reason: str = "converged"
    residual_history: list[float] = field(default_factory=list)


class SubSolverContract(Protocol):
    """Only inputs and outputs are visible to the coupling loop."""

    name: str

    def set_input(self, field: InterfaceField) -> None: ...

    def solve_call(self, budget: NewtonBudget, eps_problem: float) -> SolverCallReport: ...

    def commit_step(self) -> None: ...

    def current_output(self) -> InterfaceField: ...

    def residual_norm(self) -> float: ...


class NewtonSubSolver:
    """Resumable Newton sub-solver over a FieldKernel.

    Within one time step successive solve_call invocations continue from the
    latest iterate, so the per-call counts partition one Newton loop.
    """

    def __init__(self, kernel: FieldKernel, dt: float, cap: int, output_floor: float = 1e-12) -> None:
        if dt <= 0 or cap < 1:
            raise ContractViolationError("Sub-solver needs dt > 0 and cap >= 1")
        self.kernel = kernel
        self.name = kernel.name
        self.dt = dt
        self.cap = cap
        self.output_floor = output_floor
        self.step_index = 0
        self._committed = np.array(kernel.initial_state(), dtype=float)
        self._iterate = self._committed.copy()
        self._input = np.zeros(kernel.input_size)
        self._has_input = False

    @property
    def time(self) -> float:
        """Time level currently being solved for."""
        return (self.step_index + 1) * self.dt

    @property
    def state(self) -> np.ndarray:
        return self._iterate.copy()

    @property
    def committed_state(self) -> np.ndarray:
        return self._committed.copy()

    def context(self) -> StepContext:
        return StepContext(time=self.time, dt=self.dt, state_old=self._committed)

    def set_input(self, field: InterfaceField) -> None:
        if field.role is not self.kernel.input_role:
            raise ContractViolationError(
                f"{self.name} expects {self.kernel.input_role.value} input, got {field.role.value}"
            )
        if len(field) != self.kernel.input_size:
            raise ContractViolationError(
                f"{self.name} expects input length {self.kernel.input_size}, got {len(field)}"
            )
        self._input = np.array(field.values, dtype=float)
        self._has_input = True

    def solve_call(self, budget: NewtonBudget, eps_problem: float) -> SolverCallReport:
        if not self._has_input:
            raise ContractViolationError(f"{self.name}: set_input must precede solve_call")
        ctx = self.context()
        inp = self._input
        x, result = newton_solve(
            lambda x: self.kernel.residual(x, inp, ctx),
            lambda x: self.kernel.jacobian(x, inp, ctx),
            self._iterate,
            budget,
            eps_problem,
            self.cap,
            output_fn=lambda x: self.kernel.output(x, inp),
            output_floor=self.output_floor,
            confirm_on_entry=self.kernel.confirm_on_entry,
            line_search=self.kernel.line_search,
        )
        self._iterate = x
        return SolverCallReport(
            newton_iters=result.newton_iters,
            residual_norm=result.residual_norm,
            single_field_converged=result.converged,
            output=self.current_output(),
            stop_reason=result.stop_reason,
            residual_history=result.residual_history,
        )

    def commit_step(self) -> None:
        self._committed = self._iterate.copy()
        self.step_index += 1

    def current_output(self) -> InterfaceField:
        return InterfaceField(self.kernel.output(self._iterate, self._input), self.kernel.output_role)

    def residual_norm(self) -> float:
        r = self.kernel.residual(self._iterate, self._input, self.context())
        return float(np.linalg.norm(r))


def make_solvers(problem: CoupledProblem, dt: float, cap: int, output_floor: float = 1e-12) -> tuple[NewtonSubSolver, NewtonSubSolver]:
    """Fresh (A, B) sub-solvers for one coupled run."""
    return (
        NewtonSubSolver(problem.kernel_a, dt, cap, output_floor),
        NewtonSubSolver(problem.kernel_b, dt, cap, output_floor),
    )


def call_solver(
    solver: SubSolverContract, field: InterfaceField, budget: NewtonBudget, eps_problem: float
) -> SolverCallReport:
    solver.set_input(field)
    return solver.solve_call(budget, eps_problem)


__all__ = [
    "NewtonSubSolver",
    "SolverCallReport",
    "SubSolverContract",
    "call_solver",
    "make_solvers",
]
