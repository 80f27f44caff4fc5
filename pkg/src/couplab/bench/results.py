"""Sweep result rows and their CSV form."""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Sequence
from pathlib import Path

from pydantic import BaseModel

from ..core.ledger import IterationLedger
from ..errors import ConfigError, ContractViolationError
from .config import format_grid_value, parse_grid_value

CSV_HEADER = [
    "n_f",
    "n_s",
    "policy",
    "coupling_iters",
    "newton_f",
    "newton_s",
    "newton_total",
    "cost",
    "converged",
    "converged_steps",
    "wall_s",
]

STEPS_HEADER = ["cell", "step", "time", "coupling_iters", "newton_f", "newton_s", "converged"]


class SweepResultRow(BaseModel):
    """One grid cell (n_f/n_s set, policy empty) or one adaptive policy (policy set)."""

    n_f: int | float | None = None
    n_s: int | float | None = None
    policy: str = ""
    coupling_iters: int
    newton_f: int
    newton_s: int
    newton_total: int
    cost: float
    converged: bool
    wall_s: float = 0.0
    converged_steps: int | None = None

    @property
    def is_fixed(self) -> bool:
        return not self.policy

    @property
    def label(self) -> str:
        if self.policy:
            return self.policy
        return f"({format_grid_value(self.n_f)},{format_grid_value(self.n_s)})"

    @property
    def key(self) -> str:
        """Comma-free form of the label, e.g. ``1x1``, ``infx3`` or ``N1-CC``."""
        if self.policy:
            return self.policy
        return f"{format_grid_value(self.n_f)}x{format_grid_value(self.n_s)}"

    @property
    def cell(self) -> tuple[int | float, int | float] | None:
        if self.n_f is None or self.n_s is None:
            return None
        return (self.n_f, self.n_s)

    def identity_holds(self) -> bool:
        return self.newton_total == self.newton_f + self.newton_s

    @classmethod
    def from_ledger(
        cls,
        ledger: IterationLedger,
        cost: float,
        converged: bool,
        n_f: int | float | None = None,
        n_s: int | float | None = None,
        policy: str = "",
        wall_s: float = 0.0,
    ) -> SweepResultRow:
        return cls(
            n_f=n_f,
            n_s=n_s,
            policy=policy,
            coupling_iters=ledger.n_coupling,
            newton_f=ledger.newton_a_total,
            newton_s=ledger.newton_b_total,
            newton_total=ledger.newton_total,
            cost=cost,
            converged=converged,
            wall_s=wall_s,
            converged_steps=ledger.converged_steps,
        )


def _format_float(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return repr(float(value))


def row_to_record(row: SweepResultRow) -> dict[str, str]:
    return {
        "n_f": format_grid_value(row.n_f),
        "n_s": format_grid_value(row.n_s),
        "policy": row.policy,
        "coupling_iters": str(row.coupling_iters),
        "newton_f": str(row.newton_f),
        "newton_s": str(row.newton_s),
        "newton_total": str(row.newton_total),
        "cost": _format_float(row.cost),
        "converged": "true" if row.converged else "false",
        "converged_steps": "" if row.converged_steps is None else str(row.converged_steps),
        "wall_s": _format_float(round(row.wall_s, 6)),
    }


def record_to_row(record: dict[str, str]) -> SweepResultRow:
    return SweepResultRow(
        n_f=parse_grid_value(record["n_f"]) if record["n_f"] else None,
        n_s=parse_grid_value(record["n_s"]) if record["n_s"] else None,
        policy=record["policy"],
        coupling_iters=int(record["coupling_iters"]),
        newton_f=int(record["newton_f"]),
        newton_s=int(record["newton_s"]),
        newton_total=int(record["newton_total"]),
        cost=float(record["cost"]),
        converged=record["converged"].strip().lower() == "true",
        wall_s=float(record["wall_s"]),
        converged_steps=int(record["converged_steps"]) if record["converged_steps"] else None,
    )


def write_csv(rows: Iterable[SweepResultRow], path: str | Path) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_HEADER, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(row_to_record(row))
    except OSError as exc:
        raise OSError(exc.errno, f"Cannot write results to {path}: {exc.strerror}") from exc


def read_csv(path: str | Path) -> list[SweepResultRow]:
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames != CSV_HEADER:
                raise ConfigError(f"{path}: unexpected CSV header {reader.fieldnames}")
            try:
                return [record_to_row(rec) for rec in reader]
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"{path}:{reader.line_num}: malformed row ({exc})") from exc
    except OSError as exc:
        raise ConfigError(f"Cannot read results {path}: {exc.strerror or exc}") from exc


def write_steps_csv(
    cells: Sequence[tuple[str, IterationLedger]], path: str | Path
) -> None:
    """Per-step breakdown of every cell's ledger, one row per time step.

    Cells are keyed without commas (``1x1``, ``N1-CC``) so no field is quoted.
    """
    path = Path(path)
    for key, _ in cells:
        if "," in key:
            raise ContractViolationError(f"Step CSV cell key {key!r} contains a comma")
    try:
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=STEPS_HEADER, lineterminator="\n")
            writer.writeheader()
            for key, ledger in cells:
                for step in ledger.steps:
                    writer.writerow(
                        {
                            "cell": key,
                            "step": step.index,
                            "time": repr(round(step.time, 12)),
                            "coupling_iters": step.n_coupling,
                            "newton_f": step.newton_a,
                            "newton_s": step.newton_b,
                            "converged": "true" if step.converged else "false",
                        }
                    )
    except OSError as exc:
        raise OSError(exc.errno, f"Cannot write step breakdown to {path}: {exc.strerror}") from exc
