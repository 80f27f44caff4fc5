"""Damped Newton kernel with per-call budget semantics."""

from __future__ import annotations

import warnings
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import structlog
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from ..errors import (
    ContractViolationError,
    DivergenceError,
    NewtonNonConvergenceError,
    NumericError,
    SingularJacobianError,
)
from .budget import BudgetKind, NewtonBudget

logger = structlog.get_logger(__name__)

PIVOT_RATIO = 1e-14
DIVERGENCE_LIMIT = 1e12
BACKTRACK_FACTOR = 0.5
BACKTRACK_MAX_HALVINGS = 30
ARMIJO_C = 1e-4

VectorFn = Callable[[np.ndarray], np.ndarray]


@dataclass
class NewtonResult:
    newton_iters: int
    residual_norm: float
    converged: bool
    stop_reason: str  # "converged" | "budget" | "output_stable" | "cap"
    residual_history: list[float] = field(default_factory=list)


def _finite_residual(residual_fn: VectorFn, x: np.ndarray) -> np.ndarray:
    r = np.asarray(residual_fn(x), dtype=float)
    if not np.all(np.isfinite(r)):
        raise NumericError("Residual evaluation produced non-finite entries")
    return r


def newton_increment(jac: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Solve J dx = r by dense LU with partial pivoting, rejecting tiny pivots."""
    jac = np.atleast_2d(np.asarray(jac, dtype=float))
    if not np.all(np.isfinite(jac)):
        raise NumericError("Jacobian has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(jac, check_finite=False)
    pivots = np.abs(np.diag(lu))
    largest = float(pivots.max()) if pivots.size else 0.0
    if largest == 0.0 or float(pivots.min()) < PIVOT_RATIO * largest:
        raise SingularJacobianError(
            f"Jacobian is singular or ill-conditioned (min pivot {pivots.min():.3e}, max {largest:.3e})"
        )
    return lu_solve((lu, piv), r, check_finite=False)


def _damped_update(
    residual_fn: VectorFn, x: np.ndarray, dx: np.ndarray, rnorm: float
) -> tuple[np.ndarray, np.ndarray, float]:
    x_full = x - dx
    r_full = np.asarray(residual_fn(x_full), dtype=float)
    n_full = float(np.linalg.norm(r_full))
    if np.isfinite(n_full) and n_full <= (1.0 - ARMIJO_C) * rnorm:
        return x_full, r_full, n_full

    # Halve until Armijo holds on ||r||, else keep the best trial.
    best = (x_full, r_full, n_full if np.isfinite(n_full) else np.inf)
    lam = 1.0
    for _ in range(BACKTRACK_MAX_HALVINGS):
        lam *= BACKTRACK_FACTOR
        x_try = x - lam * dx
        r_try = np.asarray(residual_fn(x_try), dtype=float)
        n_try = float(np.linalg.norm(r_try))
        if not np.isfinite(n_try):
            continue
        if n_try < best[2]:
            best = (x_try, r_try, n_try)
        if n_try <= (1.0 - ARMIJO_C * lam) * rnorm:
            logger.debug("newton_backtracking", step_length=lam, residual=n_try)
            return x_try, r_try, n_try
    if not np.isfinite(best[2]):
        raise NumericError("Newton step produced non-finite residuals at every step length")
    logger.debug("newton_backtracking", step_length=lam, residual=best[2], armijo=False)
    return best


def newton_solve(
    residual_fn: VectorFn,
    jacobian_fn: VectorFn,
    x0: np.ndarray,
    budget: NewtonBudget,
    eps_problem: float,
    cap: int,
    output_fn: VectorFn | None = None,
    output_floor: float = 1e-12,
    confirm_on_entry: bool = False,
    line_search: bool = True,
) -> tuple[np.ndarray, NewtonResult]:
    """Iterate x <- x - J(x)^-1 r(x) until the residual, the budget, output stability or the cap stops it.

    A residual already below eps_problem at entry returns after zero iterations.
    With ``confirm_on_entry`` only the residual check that opens an iteration
    can report convergence: a Finite budget spent on its last step returns
    unconverged even if that step brought the residual below eps_problem.
    Without ``line_search`` every step is the plain Newton step.
    """
    if cap < 1:
        raise ContractViolationError("Newton cap must be >= 1")
    if budget.kind is BudgetKind.UNTIL_OUTPUT_STABLE and output_fn is None:
        raise ContractViolationError("UntilOutputStable budget requires an output function")

    x = np.array(x0, dtype=float, copy=True)
    r = _finite_residual(residual_fn, x)
    rnorm = float(np.linalg.norm(r))
    history = [rnorm]
    allowance = budget.allowance(cap)
    iters = 0
    stop = "converged"
    converged = True
    out = np.asarray(output_fn(x), dtype=float) if output_fn is not None else None

    while rnorm >= eps_problem:
        if iters >= allowance:
            if budget.kind is BudgetKind.UNTIL_CONVERGED:
                raise NewtonNonConvergenceError(
                    f"Newton did not converge within {cap} iterations (residual {rnorm:.3e})",
                    iterations=iters,
                    residual_norm=rnorm,
                )
            stop = "cap" if iters >= cap else "budget"
            converged = False
            break

        dx = newton_increment(jacobian_fn(x), r)
        if line_search:
            x, r, rnorm = _damped_update(residual_fn, x, dx, rnorm)
        else:
            x = x - dx
            r = _finite_residual(residual_fn, x)
            rnorm = float(np.linalg.norm(r))
        iters += 1
        history.append(rnorm)
        if rnorm > DIVERGENCE_LIMIT:
            raise DivergenceError(f"Newton residual {rnorm:.3e} exceeds {DIVERGENCE_LIMIT:.0e}")

        if confirm_on_entry and budget.kind is BudgetKind.FINITE and iters >= allowance:
            stop = "cap" if iters >= cap else "budget"
            converged = False
            break

        if budget.kind is BudgetKind.UNTIL_OUTPUT_STABLE and rnorm >= eps_problem:
            new_out = np.asarray(output_fn(x), dtype=float)  # type: ignore[misc]
            change = float(np.linalg.norm(new_out - out)) / max(
                float(np.linalg.norm(new_out)), output_floor
            )
            out = new_out
            if change < float(budget.eps_cid):  # type: ignore[arg-type]
                stop = "output_stable"
                converged = False
                break

    return x, NewtonResult(
        newton_iters=iters,
        residual_norm=rnorm,
        converged=converged,
        stop_reason=stop,
        residual_history=history,
    )


def finite_difference_jacobian(residual_fn: VectorFn, x: np.ndarray) -> np.ndarray:
    """Central differences with step 1e-7 * (1 + |x_i|); for checking analytic Jacobians."""
    x = np.asarray(x, dtype=float)
    r0 = np.asarray(residual_fn(x), dtype=float)
    jac = np.empty((r0.size, x.size))
    for i in range(x.size):
        h = 1e-7 * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        jac[:, i] = (np.asarray(residual_fn(xp)) - np.asarray(residual_fn(xm))) / (2.0 * h)
    return jac
