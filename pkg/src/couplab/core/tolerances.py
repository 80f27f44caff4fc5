from __future__ import annotations

from dataclasses import dataclass

from ..errors import ContractViolationError


@dataclass(frozen=True)
class CouplingTolerances:
    eps_coupling: float = 1e-5
    eps_problem_a: float = 1e-10
    eps_problem_b: float = 1e-10
    eps_cid: float = 1e-4
    relative_floor: float = 1e-12

    def __post_init__(self) -> None:
        for name in ("eps_coupling", "eps_problem_a", "eps_problem_b", "eps_cid", "relative_floor"):
            if not getattr(self, name) > 0:
                raise ContractViolationError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class CostModel:
    cost_transfer: float = 0.0
    cost_newton_a: float = 1.0
    cost_newton_b: float = 1.0

    def __post_init__(self) -> None:
        for name in ("cost_transfer", "cost_newton_a", "cost_newton_b"):
            if getattr(self, name) < 0:
                raise ContractViolationError(f"{name} must be non-negative")


@dataclass(frozen=True)
class TimeLoopConfig:
    dt: float = 0.01
    n_steps: int = 20
    max_coupling_iters: int = 200
    max_newton_per_call: int = 50

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ContractViolationError("dt must be positive")
        for name in ("n_steps", "max_coupling_iters", "max_newton_per_call"):
            if getattr(self, name) < 1:
                raise ContractViolationError(f"{name} must be >= 1")
