from __future__ import annotations

from collections.abc import Mapping
from typing import Any

from ..errors import ContractViolationError
from .base import CoupledProblem
from .mp1 import Mp1Params, Mp1Problem
from .mp2 import Mp2Params, Mp2Problem

PROBLEM_KINDS = ("mp1", "mp2")


def build_problem(kind: str, params: Mapping[str, Any] | None = None) -> CoupledProblem:
    """Instantiate a model problem from its kind and a parameter mapping."""
    params = dict(params or {})
    try:
        if kind == "mp1":
            if params.get("b") is not None:
                params["b"] = tuple(float(v) for v in params["b"])
            return Mp1Problem(Mp1Params(**params))
        if kind == "mp2":
            return Mp2Problem(Mp2Params(**params))
    except TypeError as exc:
        raise ContractViolationError(f"Invalid {kind} parameters: {exc}") from exc
    raise ContractViolationError(f"Unknown problem kind {kind!r}; expected one of {PROBLEM_KINDS}")
