"""
Nonlinear algebraic interface model (MP1).

Fluid-analog A:     r_A(t; d) = L t + alpha*tanh(t) - b(time) + mu*(C d + 0.5 d*d)
Structure-analog B: r_B(d; t) = d + beta*d^3 - t

L is the second-difference matrix (2 on the diagonal, -1 off it), C the cyclic
shift by one. mu plays the density-ratio role: 1.0 is "strong", 0.1 "weak".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..core.interface import InterfaceField, Role
from ..errors import ContractViolationError
from ..subsolver.budget import NewtonBudget
from ..subsolver.contract import NewtonSubSolver, SolverCallReport, call_solver
from .base import CoupledProblem, FieldKernel, StepContext


@dataclass(frozen=True)
class Mp1Params:
    m: int = 8
    mu: float = 1.0
    alpha: float = 0.5
    beta: float = 1.0
    b: tuple[float, ...] | None = None  # defaults to ones(m)
    load_amplitude: float = 0.0
    load_period: float = 0.2

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ContractViolationError("MP1 needs m >= 1")
        if self.mu < 0:
            raise ContractViolationError("MP1 interaction strength mu must be >= 0")
        if self.b is not None and len(self.b) != self.m:
            raise ContractViolationError(f"MP1 forcing has {len(self.b)} entries, expected {self.m}")
        if self.load_period <= 0:
            raise ContractViolationError("MP1 load_period must be positive")

    def forcing(self, time: float) -> np.ndarray:
        base = np.ones(self.m) if self.b is None else np.asarray(self.b, dtype=float)
        scale = 1.0 + self.load_amplitude * math.sin(2.0 * math.pi * time / self.load_period)
        return base * scale


def second_difference(m: int) -> np.ndarray:
    return 2.0 * np.eye(m) - np.eye(m, k=1) - np.eye(m, k=-1)


def cyclic_shift(m: int) -> np.ndarray:
    """(C d)_i = d_{(i+1) mod m}."""
    return np.roll(np.eye(m), 1, axis=1)


class Mp1FluidKernel(FieldKernel):
    name = "mp1-fluid"
    input_role = Role.DISPLACEMENT_LIKE
    output_role = Role.TRACTION_LIKE
    confirm_on_entry = True

    def __init__(self, params: Mp1Params) -> None:
        self.params = params
        self._lap = second_difference(params.m)
        self._shift = cyclic_shift(params.m)

    @property
    def state_size(self) -> int:
        return self.params.m

    @property
    def input_size(self) -> int:
        return self.params.m

    def initial_state(self) -> np.ndarray:
        return np.zeros(self.params.m)

    def residual(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        p = self.params
        d = np.asarray(inp, dtype=float)
        return (
            self._lap @ x
            + p.alpha * np.tanh(x)
            - p.forcing(ctx.time)
            + p.mu * (self._shift @ d + 0.5 * d * d)
        )

    def jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return self._lap + np.diag(self.params.alpha / np.cosh(x) ** 2)

    def input_jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return self.params.mu * (self._shift + np.diag(np.asarray(inp, dtype=float)))

    def output(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        return np.array(x, dtype=float, copy=True)

    def output_jacobian(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        return np.eye(self.params.m)


class Mp1StructureKernel(FieldKernel):
    name = "mp1-structure"
    input_role = Role.TRACTION_LIKE
    output_role = Role.DISPLACEMENT_LIKE
    # monotone cubic: plain Newton converges from any start
    line_search = False

    def __init__(self, params: Mp1Params) -> None:
        self.params = params

    @property
    def state_size(self) -> int:
        return self.params.m

    @property
    def input_size(self) -> int:
        return self.params.m

    def initial_state(self) -> np.ndarray:
        return np.zeros(self.params.m)

    def residual(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return x + self.params.beta * x**3 - np.asarray(inp, dtype=float)

    def jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return np.diag(1.0 + 3.0 * self.params.beta * x**2)

    def input_jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return -np.eye(self.params.m)

    def output(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        return np.array(x, dtype=float, copy=True)

    def output_jacobian(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        return np.eye(self.params.m)


@dataclass
class Mp1Problem(CoupledProblem):
    params: Mp1Params = field(default_factory=Mp1Params)
    name: str = "mp1"

    def __post_init__(self) -> None:
        self.kernel_a = Mp1FluidKernel(self.params)
        self.kernel_b = Mp1StructureKernel(self.params)

    def describe(self) -> dict[str, object]:
        p = self.params
        return {"problem": self.name, "m": p.m, "mu": p.mu, "alpha": p.alpha, "beta": p.beta}


def mp1_solver_a(
    d: InterfaceField,
    budget: NewtonBudget,
    eps_problem: float,
    params: Mp1Params | None = None,
    cap: int = 50,
    dt: float = 0.01,
) -> SolverCallReport:
    """One call of a fresh fluid-analog sub-solver (t starts at zero)."""
    solver = NewtonSubSolver(Mp1FluidKernel(params or Mp1Params()), dt, cap)
    return call_solver(solver, d, budget, eps_problem)


def mp1_solver_b(
    t: InterfaceField,
    budget: NewtonBudget,
    eps_problem: float,
    params: Mp1Params | None = None,
    cap: int = 50,
    dt: float = 0.01,
) -> SolverCallReport:
    """One call of a fresh structure-analog sub-solver (d starts at zero)."""
    solver = NewtonSubSolver(Mp1StructureKernel(params or Mp1Params()), dt, cap)
    return call_solver(solver, t, budget, eps_problem)
