from .interface import InterfaceField, Role, relative_change
from .ledger import CouplingRecord, IterationLedger, StepRecord, estimate_cost
from .tolerances import CostModel, CouplingTolerances, TimeLoopConfig

__all__ = [
    "CostModel",
    "CouplingRecord",
    "CouplingTolerances",
    "InterfaceField",
    "IterationLedger",
    "Role",
    "StepRecord",
    "TimeLoopConfig",
    "estimate_cost",
    "relative_change",
]
