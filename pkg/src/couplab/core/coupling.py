"""
Dirichlet-Neumann coupling loop.

Each coupling iteration calls sub-solver A on the displacement-like iterate,
hands its traction-like output to sub-solver B, measures the relative changes
of both raw outputs against the previous iteration and lets the accelerator
produce the next displacement-like iterate. A step converges only when both
changes are below eps_coupling and both sub-solvers are single-field converged;
the first iteration of a step never converges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import structlog

from ..accel.base import Accelerator
from ..errors import ContractViolationError, CouplabError, CouplingNonConvergenceError
from ..models.base import CoupledProblem
from ..policy.budgets import BudgetPolicy, PolicyState, budgets_for_call, update_policy_state
from ..subsolver.contract import NewtonSubSolver, SubSolverContract, call_solver, make_solvers
from .interface import InterfaceField, relative_change
from .ledger import CouplingRecord, IterationLedger
from .tolerances import CouplingTolerances, TimeLoopConfig

logger = structlog.get_logger(__name__)


def coupling_converged(change_a: float, change_b: float, tol: CouplingTolerances) -> bool:
    return change_a < tol.eps_coupling and change_b < tol.eps_coupling


@dataclass
class StepOutcome:
    index: int
    time: float
    displacement: InterfaceField
    traction: InterfaceField
    n_coupling: int
    newton_a: int
    newton_b: int
    change_a: float
    change_b: float
    residual_a: float
    residual_b: float
    switched_back: bool = False


def _change(prev: InterfaceField | None, curr: InterfaceField, floor: float) -> float:
    return math.inf if prev is None else relative_change(prev, curr, floor)


def run_time_step(
    solvers: tuple[SubSolverContract, SubSolverContract],
    policy: BudgetPolicy,
    accel: Accelerator,
    tol: CouplingTolerances,
    ledger: IterationLedger,
    predictor: InterfaceField,
    max_coupling_iters: int = 200,
) -> StepOutcome:
    """Couple one time level; the caller opens the ledger step, this closes it."""
    step = ledger.current_step()
    if step is None:
        raise ContractViolationError("run_time_step needs an open ledger step")
    if max_coupling_iters < 1:
        raise ContractViolationError("max_coupling_iters must be >= 1")
    solver_a, solver_b = solvers

    accel.begin_step()
    state = PolicyState()
    switched_back = False
    changes = (math.inf, math.inf)
    x = predictor
    prev_t: InterfaceField | None = None
    prev_d: InterfaceField | None = None

    try:
        for k in range(max_coupling_iters):
            budget_a, budget_b = budgets_for_call(policy, state, changes, tol)
            rep_a = call_solver(solver_a, x, budget_a, tol.eps_problem_a)
            rep_b = call_solver(solver_b, rep_a.output, budget_b, tol.eps_problem_b)
            x_tilde = rep_b.output

            changes = (
                _change(prev_t, rep_a.output, tol.relative_floor),
                _change(prev_d, x_tilde, tol.relative_floor),
            )
            ledger.record(
                CouplingRecord(
                    newton_iters_a=rep_a.newton_iters,
                    newton_iters_b=rep_b.newton_iters,
                    change_a=changes[0],
                    change_b=changes[1],
                    residual_a=rep_a.residual_norm,
                    residual_b=rep_b.residual_norm,
                )
            )
            converged = (
                k > 0
                and coupling_converged(*changes, tol)
                and rep_a.single_field_converged
                and rep_b.single_field_converged
            )
            state = update_policy_state(policy, state, changes, tol)
            switched_back = switched_back or state.switched_back

            if converged:
                solver_a.commit_step()
                solver_b.commit_step()
                accel.end_step()
                ledger.close_step(converged=True)
                logger.debug(
                    "coupling_step_converged",
                    step=step.index,
                    coupling_iters=step.n_coupling,
                    newton_a=step.newton_a,
                    newton_b=step.newton_b,
                )
                return StepOutcome(
                    index=step.index,
                    time=step.time,
                    displacement=x_tilde,
                    traction=rep_a.output,
                    n_coupling=step.n_coupling,
                    newton_a=step.newton_a,
                    newton_b=step.newton_b,
                    change_a=changes[0],
                    change_b=changes[1],
                    residual_a=rep_a.residual_norm,
                    residual_b=rep_b.residual_norm,
                    switched_back=switched_back,
                )

            x = accel.update(x, x_tilde)
            prev_t, prev_d = rep_a.output, x_tilde
    except CouplabError as exc:
        ledger.close_step(converged=False)
        logger.warning("coupling_step_failed", step=step.index, error=str(exc))
        raise

    ledger.close_step(converged=False)
    logger.warning(
        "coupling_step_failed",
        step=step.index,
        error="max_coupling_iters reached",
        change_a=changes[0],
        change_b=changes[1],
    )
    raise CouplingNonConvergenceError(
        f"Coupling did not converge within {max_coupling_iters} iterations at step {step.index} "
        f"(changes {changes[0]:.3e}, {changes[1]:.3e})",
        ledger=ledger,
        step=step.index,
    )


@dataclass
class RunResult:
    problem: str
    policy: str
    accelerator: str
    ledger: IterationLedger
    outcomes: list[StepOutcome] = field(default_factory=list)
    solver_a: NewtonSubSolver | None = None
    solver_b: NewtonSubSolver | None = None

    @property
    def final_displacement(self) -> InterfaceField:
        return self.outcomes[-1].displacement

    @property
    def final_traction(self) -> InterfaceField:
        return self.outcomes[-1].traction


def run_coupled(
    problem: CoupledProblem,
    policy: BudgetPolicy,
    accel: Accelerator,
    tol: CouplingTolerances,
    time: TimeLoopConfig,
    ledger: IterationLedger | None = None,
) -> RunResult:
    """Full time loop with fresh sub-solvers; the predictor of each step is the previous step's interface value.

    A failing step raises; pass ``ledger`` to keep the partial accounting.
    """
    ledger = ledger if ledger is not None else IterationLedger()
    solver_a, solver_b = make_solvers(
        problem, time.dt, time.max_newton_per_call, output_floor=tol.relative_floor
    )
    label = getattr(policy, "label", type(policy).__name__)
    result = RunResult(
        problem=problem.name,
        policy=label,
        accelerator=accel.name,
        ledger=ledger,
        solver_a=solver_a,
        solver_b=solver_b,
    )
    predictor = problem.initial_interface()
    for index in range(time.n_steps):
        ledger.open_step(index, (index + 1) * time.dt)
        outcome = run_time_step(
            (solver_a, solver_b), policy, accel, tol, ledger, predictor, time.max_coupling_iters
        )
        result.outcomes.append(outcome)
        predictor = outcome.displacement

    logger.info(
        "coupled_run_complete",
        problem=problem.name,
        policy=label,
        accelerator=accel.name,
        steps=time.n_steps,
        coupling_iters=ledger.n_coupling,
        newton_total=ledger.newton_total,
    )
    return result


__all__ = [
    "RunResult",
    "StepOutcome",
    "coupling_converged",
    "run_coupled",
    "run_time_step",
]
