from .budget import BudgetKind, NewtonBudget
from .contract import NewtonSubSolver, SolverCallReport, SubSolverContract, call_solver, make_solvers
from .monolithic import (
    MonolithicState,
    gauss_seidel_rate,
    monolithic_solve,
    run_monolithic,
    stacked_jacobian,
    stacked_residual,
)
from .newton import NewtonResult, finite_difference_jacobian, newton_solve

__all__ = [
    "BudgetKind",
    "MonolithicState",
    "NewtonBudget",
    "NewtonResult",
    "NewtonSubSolver",
    "SolverCallReport",
    "SubSolverContract",
    "call_solver",
    "finite_difference_jacobian",
    "gauss_seidel_rate",
    "make_solvers",
    "monolithic_solve",
    "newton_solve",
    "run_monolithic",
    "stacked_jacobian",
    "stacked_residual",
]
