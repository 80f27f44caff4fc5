"""Partitioned Dirichlet-Neumann coupling laboratory with Newton-budget policies."""

from .accel import AitkenRelaxation, ConstantRelaxation, IqnIls, build_accelerator
from .core import (
    CostModel,
    CouplingTolerances,
    InterfaceField,
    IterationLedger,
    Role,
    TimeLoopConfig,
    estimate_cost,
    relative_change,
)
from .core.coupling import RunResult, StepOutcome, coupling_converged, run_coupled, run_time_step
from .models.mp1 import Mp1Params, Mp1Problem
from .models.mp2 import Mp2Params, Mp2Problem
from .models.registry import build_problem
from .policy import ConvergedInterfaceData, FixedPerCall, NkCC, parse_policy
from .subsolver import NewtonBudget, monolithic_solve, newton_solve

__version__ = "0.1.0"

__all__ = [
    "AitkenRelaxation",
    "ConstantRelaxation",
    "ConvergedInterfaceData",
    "CostModel",
    "CouplingTolerances",
    "FixedPerCall",
    "InterfaceField",
    "IqnIls",
    "IterationLedger",
    "Mp1Params",
    "Mp1Problem",
    "Mp2Params",
    "Mp2Problem",
    "NewtonBudget",
    "NkCC",
    "Role",
    "RunResult",
    "StepOutcome",
    "TimeLoopConfig",
    "build_accelerator",
    "build_problem",
    "coupling_converged",
    "estimate_cost",
    "monolithic_solve",
    "newton_solve",
    "parse_policy",
    "relative_change",
    "run_coupled",
    "run_time_step",
]
