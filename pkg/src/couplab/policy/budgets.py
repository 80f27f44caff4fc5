"""
Newton-budget policies.

A policy maps the coupling-loop state of the current time step to the
per-call budgets of the two sub-solvers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace

from ..core.tolerances import CouplingTolerances
from ..errors import ContractViolationError
from ..subsolver.budget import NewtonBudget

STRICT_FACTOR = 0.1


def _grid_label(n: int | float) -> str:
    return "inf" if isinstance(n, float) and math.isinf(n) else str(int(n))


@dataclass(frozen=True)
class FixedPerCall:
    n_a: int | float = math.inf
    n_b: int | float = math.inf
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        for n in (self.n_a, self.n_b):
            if not (n == math.inf or (float(n).is_integer() and n >= 1)):
                raise ContractViolationError(f"Fixed budget must be an integer >= 1 or inf, got {n}")

    @property
    def label(self) -> str:
        return f"({_grid_label(self.n_a)},{_grid_label(self.n_b)})"


@dataclass(frozen=True)
class NkCC:
    """k Newton iterations per call until coupling convergence, then full convergence."""

    k: int = 1
    strict_factor: float = 1.0
    name: str = ""

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ContractViolationError("NkCC needs k >= 1")
        if not 0.0 < self.strict_factor <= 1.0:
            raise ContractViolationError("strict_factor must lie in (0, 1]")
        if not self.name:
            suffix = "" if self.strict_factor == 1.0 else "-strict"
            object.__setattr__(self, "name", f"N{self.k}-CC{suffix}")

    @property
    def label(self) -> str:
        return self.name


@dataclass(frozen=True)
class ConvergedInterfaceData:
    eps_cid: float = 1e-4
    name: str = "CID"

    def __post_init__(self) -> None:
        if not self.eps_cid > 0:
            raise ContractViolationError("eps_cid must be positive")

    @property
    def label(self) -> str:
        return self.name


BudgetPolicy = FixedPerCall | NkCC | ConvergedInterfaceData


@dataclass(frozen=True)
class PolicyState:
    cc_reached: bool = False
    switched_back: bool = False


_NKCC = re.compile(r"^N(?P<k>[1-9][0-9]*)-CC(?P<strict>-strict)?$")


def parse_policy(spec: str | dict[str, object], tol: CouplingTolerances | None = None) -> BudgetPolicy:
    """Policy from a name ("N1-CC", "N3-CC-strict", "CID") or a mapping with a ``kind`` key."""
    tol = tol or CouplingTolerances()
    if isinstance(spec, str):
        match = _NKCC.match(spec)
        if match:
            factor = STRICT_FACTOR if match.group("strict") else 1.0
            return NkCC(k=int(match.group("k")), strict_factor=factor)
        if spec == "CID":
            return ConvergedInterfaceData(eps_cid=tol.eps_cid)
        raise ContractViolationError(f"Unknown policy name {spec!r}")

    data = dict(spec)
    kind = data.pop("kind", None)
    try:
        if kind == "nk-cc":
            return NkCC(**data)  # type: ignore[arg-type]
        if kind == "cid":
            data.setdefault("eps_cid", tol.eps_cid)
            return ConvergedInterfaceData(**data)  # type: ignore[arg-type]
        if kind == "fixed":
            return FixedPerCall(**data)  # type: ignore[arg-type]
    except TypeError as exc:
        raise ContractViolationError(f"Invalid {kind} policy: {exc}") from exc
    raise ContractViolationError(f"Unknown policy kind {kind!r}")


def budgets_for_call(
    policy: BudgetPolicy,
    state: PolicyState,
    last_changes: tuple[float, float],
    tol: CouplingTolerances,
) -> tuple[NewtonBudget, NewtonBudget]:
    if isinstance(policy, FixedPerCall):
        return NewtonBudget.from_count(policy.n_a), NewtonBudget.from_count(policy.n_b)
    if isinstance(policy, NkCC):
        if state.cc_reached:
            return NewtonBudget.until_converged(), NewtonBudget.until_converged()
        return NewtonBudget.finite(policy.k), NewtonBudget.finite(policy.k)
    budget = NewtonBudget.until_output_stable(policy.eps_cid)
    return budget, budget


def update_policy_state(
    policy: BudgetPolicy,
    state: PolicyState,
    last_changes: tuple[float, float],
    tol: CouplingTolerances,
) -> PolicyState:
    """Track the NkCC trigger; other policies carry the state through unchanged."""
    if not isinstance(policy, NkCC):
        return state
    change_a, change_b = last_changes
    trigger = policy.strict_factor * tol.eps_coupling
    if state.cc_reached:
        if change_a >= tol.eps_coupling or change_b >= tol.eps_coupling:
            return PolicyState(cc_reached=False, switched_back=True)
        return state
    if change_a < trigger and change_b < trigger:
        return replace(state, cc_reached=True)
    return state


__all__ = [
    "BudgetPolicy",
    "ConvergedInterfaceData",
    "FixedPerCall",
    "NkCC",
    "PolicyState",
    "STRICT_FACTOR",
    "budgets_for_call",
    "parse_policy",
    "update_policy_state",
]
