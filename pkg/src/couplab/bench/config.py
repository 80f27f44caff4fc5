"""
Sweep configuration: a JSON document validated against ``SWEEP_SCHEMA`` and
then loaded into the typed ``SweepConfig`` model with every default filled.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Literal

from jsonschema import Draft7Validator
from pydantic import BaseModel, Field, ValidationError, field_validator

from ..accel.base import Accelerator, build_accelerator
from ..core.tolerances import CostModel, CouplingTolerances, TimeLoopConfig
from ..errors import ConfigError, CouplabError
from ..models.base import CoupledProblem
from ..models.registry import build_problem
from ..policy.budgets import BudgetPolicy, FixedPerCall, parse_policy

INF = "inf"
DEFAULT_GRID: list[int | float] = [1, 2, 3, 4, 5, math.inf]

_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_NON_NEGATIVE = {"type": "number", "minimum": 0}
_COUNT = {"type": "integer", "minimum": 1}
_GRID_AXIS = {
    "type": "array",
    "minItems": 1,
    "items": {"anyOf": [{"type": "integer", "minimum": 1}, {"const": INF}]},
}

SWEEP_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "problem": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["mp1", "mp2"]},
                "params": {"type": "object"},
            },
            "additionalProperties": False,
        },
        "accelerator": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["constant", "aitken", "iqn-ils"]},
                "omega": _POSITIVE,
                "omega0": _POSITIVE,
                "omega_min": _POSITIVE,
                "omega_max": _POSITIVE,
                "reuse_steps": {"type": "integer", "minimum": 0},
                "qr_filter_eps": _POSITIVE,
                "fallback_omega": _POSITIVE,
            },
            "additionalProperties": False,
        },
        "tolerances": {
            "type": "object",
            "properties": {
                "eps_coupling": _POSITIVE,
                "eps_problem": _POSITIVE,
                "eps_problem_a": _POSITIVE,
                "eps_problem_b": _POSITIVE,
                "eps_cid": _POSITIVE,
                "relative_floor": _POSITIVE,
            },
            "additionalProperties": False,
        },
        "time": {
            "type": "object",
            "properties": {
                "dt": _POSITIVE,
                "n_steps": _COUNT,
                "max_coupling_iters": _COUNT,
                "max_newton_per_call": _COUNT,
            },
            "additionalProperties": False,
        },
        "cost": {
            "type": "object",
            "properties": {
                "cost_transfer": _NON_NEGATIVE,
                "cost_newton_a": _NON_NEGATIVE,
                "cost_newton_b": _NON_NEGATIVE,
            },
            "additionalProperties": False,
        },
        "grid": {
            "type": "object",
            "properties": {"n_a": _GRID_AXIS, "n_b": _GRID_AXIS},
            "additionalProperties": False,
        },
        "policies": {
            "type": "array",
            "items": {
                "anyOf": [
                    {"type": "string"},
                    {
                        "type": "object",
                        "properties": {"kind": {"enum": ["nk-cc", "cid", "fixed"]}},
                        "required": ["kind"],
                    },
                ]
            },
        },
        "output": {
            "type": "object",
            "properties": {
                "csv": {"type": "string"},
                "steps_csv": {"type": "string"},
                "heatmap_dir": {"type": "string"},
                "metrics": {"type": "string"},
                "timing": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "workers": _COUNT,
    },
    "additionalProperties": False,
}


def parse_grid_value(value: int | float | str) -> int | float:
    """Grid entry to a budget count: positive int or math.inf."""
    if isinstance(value, str):
        if value.strip().lower() == INF:
            return math.inf
        value = int(value)
    if isinstance(value, float) and math.isinf(value):
        return math.inf
    if int(value) != value or value < 1:
        raise ValueError(f"grid value must be an integer >= 1 or {INF!r}, got {value!r}")
    return int(value)


def format_grid_value(value: int | float | None) -> str:
    if value is None:
        return ""
    return INF if math.isinf(value) else str(int(value))


class ProblemSection(BaseModel):
    kind: Literal["mp1", "mp2"] = "mp1"
    params: dict[str, Any] = Field(default_factory=dict)


class AcceleratorSection(BaseModel):
    kind: Literal["constant", "aitken", "iqn-ils"] = "iqn-ils"
    omega: float = 1.0
    omega0: float = 0.5
    omega_min: float = 0.01
    omega_max: float = 2.0
    reuse_steps: int = 4
    qr_filter_eps: float = 1e-8
    fallback_omega: float = 0.5

    def build(self) -> Accelerator:
        if self.kind == "constant":
            return build_accelerator("constant", omega=self.omega)
        if self.kind == "aitken":
            return build_accelerator(
                "aitken", omega0=self.omega0, omega_min=self.omega_min, omega_max=self.omega_max
            )
        return build_accelerator(
            "iqn-ils",
            reuse_steps=self.reuse_steps,
            qr_filter_eps=self.qr_filter_eps,
            fallback_omega=self.fallback_omega,
        )


class TolerancesSection(BaseModel):
    eps_coupling: float = 1e-5
    eps_problem: float = 1e-10
    eps_problem_a: float | None = None
    eps_problem_b: float | None = None
    eps_cid: float = 1e-4
    relative_floor: float = 1e-12

    def build(self) -> CouplingTolerances:
        return CouplingTolerances(
            eps_coupling=self.eps_coupling,
            eps_problem_a=self.eps_problem_a or self.eps_problem,
            eps_problem_b=self.eps_problem_b or self.eps_problem,
            eps_cid=self.eps_cid,
            relative_floor=self.relative_floor,
        )


class TimeSection(BaseModel):
    dt: float = 0.01
    n_steps: int = 20
    max_coupling_iters: int = 200
    max_newton_per_call: int = 50

    def build(self) -> TimeLoopConfig:
        return TimeLoopConfig(**self.model_dump())


class CostSection(BaseModel):
    cost_transfer: float = 0.0
    cost_newton_a: float = 1.0
    cost_newton_b: float = 1.0

    def build(self) -> CostModel:
        return CostModel(**self.model_dump())


class GridSection(BaseModel):
    n_a: list[int | float] = Field(default_factory=lambda: list(DEFAULT_GRID))
    n_b: list[int | float] = Field(default_factory=lambda: list(DEFAULT_GRID))

    @field_validator("n_a", "n_b", mode="before")
    @classmethod
    def _parse_axis(cls, values: list[int | float | str]) -> list[int | float]:
        return [parse_grid_value(v) for v in values]

    def cells(self) -> list[tuple[int | float, int | float]]:
        """Row-major: n_a outer, n_b inner."""
        return [(a, b) for a in self.n_a for b in self.n_b]


class OutputSection(BaseModel):
    csv: str | None = None
    steps_csv: str | None = None
    heatmap_dir: str | None = None
    metrics: str | None = None
    timing: bool = False


class SweepConfig(BaseModel):
    name: str = "sweep"
    problem: ProblemSection = Field(default_factory=ProblemSection)
    accelerator: AcceleratorSection = Field(default_factory=AcceleratorSection)
    tolerances: TolerancesSection = Field(default_factory=TolerancesSection)
    time: TimeSection = Field(default_factory=TimeSection)
    cost: CostSection = Field(default_factory=CostSection)
    grid: GridSection = Field(default_factory=GridSection)
    policies: list[str | dict[str, Any]] = Field(default_factory=list)
    output: OutputSection = Field(default_factory=OutputSection)
    workers: int | None = None

    def build_problem(self) -> CoupledProblem:
        return build_problem(self.problem.kind, self.problem.params)

    def build_accelerator(self) -> Accelerator:
        return self.accelerator.build()

    def build_tolerances(self) -> CouplingTolerances:
        return self.tolerances.build()

    def build_time(self) -> TimeLoopConfig:
        return self.time.build()

    def build_cost(self) -> CostModel:
        return self.cost.build()

    def fixed_policies(self) -> list[FixedPerCall]:
        return [FixedPerCall(a, b) for a, b in self.grid.cells()]

    def adaptive_policies(self) -> list[BudgetPolicy]:
        tol = self.build_tolerances()
        return [parse_policy(p, tol) for p in self.policies]

    def check(self) -> SweepConfig:
        """Build every component once so that parameter errors surface at load time."""
        self.build_problem()
        self.build_accelerator()
        self.build_time()
        self.build_cost()
        self.adaptive_policies()
        return self


def _schema_error(doc: dict[str, Any]) -> str | None:
    errors = sorted(Draft7Validator(SWEEP_SCHEMA).iter_errors(doc), key=lambda e: [str(p) for p in e.absolute_path])
    if not errors:
        return None
    err = errors[0]
    where = ".".join(str(p) for p in err.absolute_path) or "<root>"
    return f"Invalid config field '{where}': {err.message}"


def config_from_dict(doc: dict[str, Any]) -> SweepConfig:
    message = _schema_error(doc)
    if message:
        raise ConfigError(message)
    try:
        return SweepConfig.model_validate(doc).check()
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ConfigError(f"Invalid config field '{where}': {first['msg']}") from exc
    except CouplabError as exc:
        raise ConfigError(f"Invalid config: {exc}") from exc


def load_config(path: str | Path) -> SweepConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top-level JSON value must be an object")
    return config_from_dict(doc)
