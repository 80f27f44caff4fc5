"""
Monolithic oracle built from the two field kernels of a coupled problem.

The stacked unknown is X = [x_A; x_B]. The interface data are eliminated by
composition: A reads B's output, B reads A's output, so the stacked residual
vanishes exactly at the fixed point of the partitioned iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog
from scipy.linalg import eigvals, lu_factor, lu_solve

from ..core.interface import InterfaceField
from ..core.tolerances import TimeLoopConfig
from ..errors import ContractViolationError
from ..models.base import CoupledProblem, FieldKernel, StepContext
from .budget import NewtonBudget
from .newton import newton_solve

logger = structlog.get_logger(__name__)


@dataclass
class MonolithicState:
    """Converged stacked state of one time level."""

    x_a: np.ndarray
    x_b: np.ndarray
    displacement: InterfaceField
    traction: InterfaceField
    newton_iters: int = 0


def initial_contexts(problem: CoupledProblem, dt: float) -> tuple[StepContext, StepContext]:
    """Contexts of the first time level, starting from the kernels' initial states."""
    return (
        StepContext(time=dt, dt=dt, state_old=problem.kernel_a.initial_state()),
        StepContext(time=dt, dt=dt, state_old=problem.kernel_b.initial_state()),
    )


def _interface_inputs(
    problem: CoupledProblem, x_a: np.ndarray, x_b: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    kb = problem.kernel_b
    inp_a = np.asarray(kb.output(x_b, np.zeros(kb.input_size)), dtype=float)
    inp_b = np.asarray(problem.kernel_a.output(x_a, inp_a), dtype=float)
    return inp_a, inp_b


def _split(problem: CoupledProblem, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    na = problem.kernel_a.state_size
    if x.size != na + problem.kernel_b.state_size:
        raise ContractViolationError(
            f"Stacked state has {x.size} entries, expected "
            f"{na + problem.kernel_b.state_size}"
        )
    return x[:na], x[na:]


def stacked_residual(
    problem: CoupledProblem,
    x_a: np.ndarray,
    x_b: np.ndarray,
    ctx_a: StepContext,
    ctx_b: StepContext,
) -> np.ndarray:
    """[r_A(x_A; out_B(x_B)); r_B(x_B; out_A(x_A))]."""
    x_a = np.asarray(x_a, dtype=float)
    x_b = np.asarray(x_b, dtype=float)
    inp_a, inp_b = _interface_inputs(problem, x_a, x_b)
    return np.concatenate(
        (
            problem.kernel_a.residual(x_a, inp_a, ctx_a),
            problem.kernel_b.residual(x_b, inp_b, ctx_b),
        )
    )


def stacked_jacobian(
    problem: CoupledProblem,
    x_a: np.ndarray,
    x_b: np.ndarray,
    ctx_a: StepContext,
    ctx_b: StepContext,
) -> np.ndarray:
    ka, kb = problem.kernel_a, problem.kernel_b
    x_a = np.asarray(x_a, dtype=float)
    x_b = np.asarray(x_b, dtype=float)
    inp_a, inp_b = _interface_inputs(problem, x_a, x_b)

    ob_x = kb.output_jacobian(x_b, np.zeros(kb.input_size))
    oa_x = ka.output_jacobian(x_a, inp_a)
    oa_inp = ka.output_input_jacobian(x_a, inp_a)
    ra_inp = ka.input_jacobian(x_a, inp_a, ctx_a)
    rb_inp = kb.input_jacobian(x_b, inp_b, ctx_b)

    top = np.hstack((ka.jacobian(x_a, inp_a, ctx_a), ra_inp @ ob_x))
    bottom = np.hstack(
        (rb_inp @ oa_x, kb.jacobian(x_b, inp_b, ctx_b) + rb_inp @ oa_inp @ ob_x)
    )
    return np.vstack((top, bottom))


def _solve_level(
    problem: CoupledProblem,
    ctx_a: StepContext,
    ctx_b: StepContext,
    x0_a: np.ndarray,
    x0_b: np.ndarray,
    eps: float,
    cap: int,
) -> MonolithicState:
    x0 = np.concatenate((np.asarray(x0_a, dtype=float), np.asarray(x0_b, dtype=float)))

    def residual(x: np.ndarray) -> np.ndarray:
        xa, xb = _split(problem, x)
        return stacked_residual(problem, xa, xb, ctx_a, ctx_b)

    def jacobian(x: np.ndarray) -> np.ndarray:
        xa, xb = _split(problem, x)
        return stacked_jacobian(problem, xa, xb, ctx_a, ctx_b)

    x, result = newton_solve(residual, jacobian, x0, NewtonBudget.until_converged(), eps, cap)
    x_a, x_b = _split(problem, x)
    inp_a, _ = _interface_inputs(problem, x_a, x_b)
    return MonolithicState(
        x_a=x_a.copy(),
        x_b=x_b.copy(),
        displacement=problem.interface_from_b(x_b),
        traction=InterfaceField(problem.kernel_a.output(x_a, inp_a), problem.kernel_a.output_role),
        newton_iters=result.newton_iters,
    )


def monolithic_solve(
    problem: CoupledProblem,
    eps: float = 1e-12,
    dt: float = 0.01,
    cap: int = 100,
) -> tuple[InterfaceField, InterfaceField]:
    """Newton on the stacked system of the first time level; returns (d, t)."""
    ctx_a, ctx_b = initial_contexts(problem, dt)
    state = _solve_level(problem, ctx_a, ctx_b, ctx_a.state_old, ctx_b.state_old, eps, cap)
    return state.displacement, state.traction


def run_monolithic(
    problem: CoupledProblem, time: TimeLoopConfig, eps: float = 1e-12, cap: int = 100
) -> list[MonolithicState]:
    """Reference trajectory: one converged stacked state per time step."""
    x_a = problem.kernel_a.initial_state()
    x_b = problem.kernel_b.initial_state()
    states: list[MonolithicState] = []
    for step in range(time.n_steps):
        t = (step + 1) * time.dt
        ctx_a = StepContext(time=t, dt=time.dt, state_old=x_a)
        ctx_b = StepContext(time=t, dt=time.dt, state_old=x_b)
        state = _solve_level(problem, ctx_a, ctx_b, x_a, x_b, eps, cap)
        states.append(state)
        x_a, x_b = state.x_a, state.x_b
    logger.debug("monolithic_run_complete", problem=problem.name, steps=len(states))
    return states


def _sensitivity(kernel: FieldKernel, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
    """d output / d input with the state eliminated through r(x; inp) = 0."""
    lu = lu_factor(kernel.jacobian(x, inp, ctx))
    dx = -lu_solve(lu, kernel.input_jacobian(x, inp, ctx))
    return kernel.output_input_jacobian(x, inp) + kernel.output_jacobian(x, inp) @ dx


def gauss_seidel_rate(
    problem: CoupledProblem, dt: float = 0.01, eps: float = 1e-12, cap: int = 100
) -> float:
    """Spectral radius of the linearized Dirichlet-Neumann interface map at the first time level.

    Values above one mean the unrelaxed iteration (omega = 1) diverges.
    """
    ctx_a, ctx_b = initial_contexts(problem, dt)
    state = _solve_level(problem, ctx_a, ctx_b, ctx_a.state_old, ctx_b.state_old, eps, cap)
    inp_a, inp_b = _interface_inputs(problem, state.x_a, state.x_b)
    s_a = _sensitivity(problem.kernel_a, state.x_a, inp_a, ctx_a)
    s_b = _sensitivity(problem.kernel_b, state.x_b, inp_b, ctx_b)
    return float(np.max(np.abs(eigvals(s_b @ s_a))))


__all__ = [
    "MonolithicState",
    "gauss_seidel_rate",
    "initial_contexts",
    "monolithic_solve",
    "run_monolithic",
    "stacked_jacobian",
    "stacked_residual",
]
