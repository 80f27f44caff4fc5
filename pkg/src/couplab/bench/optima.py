from __future__ import annotations

from collections.abc import Callable, Sequence

from pydantic import BaseModel

from ..errors import ContractViolationError
from .results import SweepResultRow


class Optimum(BaseModel):
    value: float
    cells: list[str]


class OptimaSummary(BaseModel):
    newton_total: Optimum
    coupling_iters: Optimum
    cost: Optimum
    pareto: list[str]
    considered: int


def _argmin(rows: Sequence[SweepResultRow], key: Callable[[SweepResultRow], float]) -> Optimum:
    best = min(key(r) for r in rows)
    return Optimum(value=best, cells=[r.label for r in rows if key(r) == best])


def _pareto(rows: Sequence[SweepResultRow]) -> list[str]:
    front = []
    for r in rows:
        dominated = any(
            o.coupling_iters <= r.coupling_iters
            and o.newton_total <= r.newton_total
            and (o.coupling_iters < r.coupling_iters or o.newton_total < r.newton_total)
            for o in rows
        )
        if not dominated:
            front.append(r.label)
    return front


def find_optima(rows: Sequence[SweepResultRow]) -> OptimaSummary:
    """Argmin cells (ties listed in row order) of newton_total, coupling_iters and cost,
    plus the Pareto set over (coupling_iters, newton_total).

    Only converged rows compete unless none converged.
    """
    if not rows:
        raise ContractViolationError("find_optima needs at least one row")
    pool = [r for r in rows if r.converged] or list(rows)
    return OptimaSummary(
        newton_total=_argmin(pool, lambda r: r.newton_total),
        coupling_iters=_argmin(pool, lambda r: r.coupling_iters),
        cost=_argmin(pool, lambda r: r.cost),
        pareto=_pareto(pool),
        considered=len(pool),
    )
