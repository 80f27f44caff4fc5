"""
1D nonlinear transmission problem (MP2).

u_t - (k(u) u')' = f on [0, len_a] (A) and [len_a, len_a + len_b] (B), with
k(u) = k0 * (1 + nonlinearity * u^2), BDF1 in time and vertex-centred finite
volumes in space. Dirichlet end values u_left / u_right.

A receives the interface value (Dirichlet role) and returns the interface flux
-k(u) du/dx from a one-sided second-order stencil. B receives that flux as a
Neumann condition on a half control volume and returns its interface value.
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
class Mp2Params:
    cells_a: int = 40
    cells_b: int = 40
    len_a: float = 1.0
    len_b: float = 1.0
    k0_a: float = 1.0
    k0_b: float = 0.1
    nonlinearity: float = 1.0
    u_left: float = 1.5
    u_right: float = 0.5
    forcing_amplitude: float = 0.0
    forcing_period: float = 0.5
    steady: bool = False

    def __post_init__(self) -> None:
        if self.cells_a < 2 or self.cells_b < 1:
            raise ContractViolationError("MP2 needs cells_a >= 2 and cells_b >= 1")
        if self.k0_a <= 0 or self.k0_b <= 0:
            raise ContractViolationError("MP2 base diffusivities must be positive")
        if self.nonlinearity < 0:
            raise ContractViolationError("MP2 nonlinearity must be >= 0 to keep k(u) positive")
        if self.len_a <= 0 or self.len_b <= 0 or self.forcing_period <= 0:
            raise ContractViolationError("MP2 lengths and forcing_period must be positive")

    @property
    def h_a(self) -> float:
        return self.len_a / self.cells_a

    @property
    def h_b(self) -> float:
        return self.len_b / self.cells_b

    def forcing(self, time: float) -> float:
        return self.forcing_amplitude * math.sin(2.0 * math.pi * time / self.forcing_period)

    def initial_profile(self, x: np.ndarray) -> np.ndarray:
        total = self.len_a + self.len_b
        return self.u_left + (self.u_right - self.u_left) * x / total

    def steady_linear_interface_value(self) -> float:
        """Exact interface value of the two-slab steady conduction problem with constant k."""
        ga = self.k0_a / self.len_a
        gb = self.k0_b / self.len_b
        return (ga * self.u_left + gb * self.u_right) / (ga + gb)


def _conductivity(u: np.ndarray, k0: float, nu: float) -> tuple[np.ndarray, np.ndarray]:
    return k0 * (1.0 + nu * u * u), 2.0 * k0 * nu * u


def _face_fluxes(
    u: np.ndarray, k0: float, nu: float, h: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """F_{j+1/2} = -k(mean) (u_{j+1} - u_j) / h and its derivatives w.r.t. u_j, u_{j+1}."""
    mean = 0.5 * (u[:-1] + u[1:])
    grad = (u[1:] - u[:-1]) / h
    k, dk = _conductivity(mean, k0, nu)
    flux = -k * grad
    d_left = -0.5 * dk * grad + k / h
    d_right = -0.5 * dk * grad - k / h
    return flux, d_left, d_right


def _storage(p: Mp2Params, dt: float) -> float:
    return 0.0 if p.steady else 1.0 / dt


class Mp2ValueKernel(FieldKernel):
    """Subdomain A: interface value in, interface flux out."""

    name = "mp2-a"
    input_role = Role.DISPLACEMENT_LIKE
    output_role = Role.TRACTION_LIKE
    confirm_on_entry = True

    def __init__(self, params: Mp2Params) -> None:
        self.params = params
        self.nodes = np.linspace(0.0, params.len_a, params.cells_a + 1)

    @property
    def state_size(self) -> int:
        return self.params.cells_a - 1

    @property
    def input_size(self) -> int:
        return 1

    def initial_state(self) -> np.ndarray:
        return self.params.initial_profile(self.nodes[1:-1])

    def _full(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        return np.concatenate(([self.params.u_left], x, [float(np.asarray(inp).reshape(-1)[0])]))

    def _full_system(
        self, x: np.ndarray, inp: np.ndarray, ctx: StepContext
    ) -> tuple[np.ndarray, np.ndarray]:
        """Residual and Jacobian w.r.t. all nodes (columns 0..N, Dirichlet ends included)."""
        p = self.params
        h = p.h_a
        u = self._full(x, inp)
        flux, d_left, d_right = _face_fluxes(u, p.k0_a, p.nonlinearity, h)
        c = _storage(p, ctx.dt)
        n = p.cells_a
        res = c * h * (x - ctx.state_old) + flux[1:] - flux[:-1] - h * p.forcing(ctx.time)
        jac = np.zeros((n - 1, n + 1))
        rows = np.arange(n - 1)
        nodes = rows + 1
        jac[rows, nodes - 1] = -d_left[:-1]
        jac[rows, nodes] = c * h + d_left[1:] - d_right[:-1]
        jac[rows, nodes + 1] = d_right[1:]
        return res, jac

    def residual(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return self._full_system(x, inp, ctx)[0]

    def jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return self._full_system(x, inp, ctx)[1][:, 1:-1]

    def input_jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return self._full_system(x, inp, ctx)[1][:, -1:]

    def _flux_gradient(self, x: np.ndarray, inp: np.ndarray) -> tuple[float, np.ndarray]:
        """Interface flux and its derivative w.r.t. the full node vector."""
        p = self.params
        h = p.h_a
        u = self._full(x, inp)
        g = 3.0 * u[-1] - 4.0 * u[-2] + u[-3]
        k, dk = _conductivity(u[-1:], p.k0_a, p.nonlinearity)
        q = -k[0] * g / (2.0 * h)
        grad = np.zeros(u.size)
        grad[-1] = -dk[0] * g / (2.0 * h) - 3.0 * k[0] / (2.0 * h)
        grad[-2] = 4.0 * k[0] / (2.0 * h)
        grad[-3] = -k[0] / (2.0 * h)
        return q, grad

    def output(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        return np.array([self._flux_gradient(x, inp)[0]])

    def output_jacobian(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        return self._flux_gradient(x, inp)[1][1:-1].reshape(1, -1)

    def output_input_jacobian(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        return self._flux_gradient(x, inp)[1][-1:].reshape(1, 1)


class Mp2FluxKernel(FieldKernel):
    """Subdomain B: interface flux in (Neumann), interface value out."""

    name = "mp2-b"
    input_role = Role.TRACTION_LIKE
    output_role = Role.DISPLACEMENT_LIKE

    def __init__(self, params: Mp2Params) -> None:
        self.params = params
        self.nodes = np.linspace(params.len_a, params.len_a + params.len_b, params.cells_b + 1)

    @property
    def state_size(self) -> int:
        return self.params.cells_b

    @property
    def input_size(self) -> int:
        return 1

    def initial_state(self) -> np.ndarray:
        return self.params.initial_profile(self.nodes[:-1])

    def residual(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return self._system(x, inp, ctx)[0]

    def jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        return self._system(x, inp, ctx)[1]

    def _system(
        self, x: np.ndarray, inp: np.ndarray, ctx: StepContext
    ) -> tuple[np.ndarray, np.ndarray]:
        p = self.params
        h = p.h_b
        q = float(np.asarray(inp).reshape(-1)[0])
        u = np.concatenate((x, [p.u_right]))
        flux, d_left, d_right = _face_fluxes(u, p.k0_b, p.nonlinearity, h)
        c = _storage(p, ctx.dt)
        f = p.forcing(ctx.time)
        volume = np.full(p.cells_b, h)
        volume[0] = 0.5 * h
        inflow = np.concatenate(([q], flux[:-1]))
        res = c * volume * (x - ctx.state_old) + flux - inflow - volume * f

        n = p.cells_b
        jac = np.zeros((n, n))
        idx = np.arange(n)
        jac[idx, idx] = c * volume + d_left
        jac[idx[:-1], idx[:-1] + 1] = d_right[:-1]
        jac[idx[1:], idx[1:]] -= d_right[:-1]
        jac[idx[1:], idx[1:] - 1] = -d_left[:-1]
        return res, jac

    def input_jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        jac = np.zeros((self.params.cells_b, 1))
        jac[0, 0] = -1.0
        return jac

    def output(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        return np.array([float(x[0])])

    def output_jacobian(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        jac = np.zeros((1, self.params.cells_b))
        jac[0, 0] = 1.0
        return jac


@dataclass
class Mp2Problem(CoupledProblem):
    params: Mp2Params = field(default_factory=Mp2Params)
    name: str = "mp2"

    def __post_init__(self) -> None:
        self.kernel_a = Mp2ValueKernel(self.params)
        self.kernel_b = Mp2FluxKernel(self.params)

    def describe(self) -> dict[str, object]:
        p = self.params
        return {
            "problem": self.name,
            "k_ratio": p.k0_a / p.k0_b,
            "cells": (p.cells_a, p.cells_b),
            "nonlinearity": p.nonlinearity,
        }


def mp2_solver_a(
    value: InterfaceField,
    budget: NewtonBudget,
    eps_problem: float,
    params: Mp2Params | None = None,
    cap: int = 50,
    dt: float = 0.01,
) -> SolverCallReport:
    """First time level of subdomain A with the interface value imposed; returns the flux."""
    solver = NewtonSubSolver(Mp2ValueKernel(params or Mp2Params()), dt, cap)
    return call_solver(solver, value, budget, eps_problem)


def mp2_solver_b(
    flux: InterfaceField,
    budget: NewtonBudget,
    eps_problem: float,
    params: Mp2Params | None = None,
    cap: int = 50,
    dt: float = 0.01,
) -> SolverCallReport:
    """First time level of subdomain B with the interface flux imposed; returns the value."""
    solver = NewtonSubSolver(Mp2FluxKernel(params or Mp2Params()), dt, cap)
    return call_solver(solver, flux, budget, eps_problem)
