"""
Budget sweeps: one fresh coupled run per grid cell and per adaptive policy.

Cells run on worker threads (anyio) and are assembled in request order, so the
output does not depend on scheduling.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import partial

import anyio
import anyio.to_thread
import structlog
from structlog.contextvars import bound_contextvars

from ..config import settings
from ..core.coupling import run_coupled
from ..core.ledger import IterationLedger, estimate_cost
from ..errors import CouplabError
from ..policy.budgets import BudgetPolicy, FixedPerCall
from .config import SweepConfig
from .metrics import SweepMetrics
from .results import SweepResultRow

logger = structlog.get_logger(__name__)


@dataclass
class CaseResult:
    row: SweepResultRow
    ledger: IterationLedger
    seconds: float
    error: str | None = None

    @property
    def label(self) -> str:
        return self.row.label

    @property
    def key(self) -> str:
        return self.row.key


def policy_label(policy: BudgetPolicy) -> str:
    return policy.label


def run_case(config: SweepConfig, policy: BudgetPolicy, timing: bool = False) -> CaseResult:
    """Run one cell from scratch; coupling failures become a non-converged row."""
    label = policy_label(policy)
    ledger = IterationLedger()
    error: str | None = None
    with bound_contextvars(cell=label):
        start = time.perf_counter()
        try:
            run_coupled(
                config.build_problem(),
                policy,
                config.build_accelerator(),
                config.build_tolerances(),
                config.build_time(),
                ledger=ledger,
            )
        except CouplabError as exc:
            error = str(exc)
            logger.warning("sweep_cell_failed", error=error, coupling_iters=ledger.n_coupling)
        seconds = time.perf_counter() - start

        if isinstance(policy, FixedPerCall):
            extra: dict[str, object] = {"n_f": policy.n_a, "n_s": policy.n_b}
        else:
            extra = {"policy": label}
        row = SweepResultRow.from_ledger(
            ledger,
            cost=estimate_cost(ledger, config.build_cost()),
            converged=error is None,
            wall_s=seconds if timing else 0.0,
            **extra,  # type: ignore[arg-type]
        )
        if error is None:
            logger.info(
                "sweep_cell_complete",
                coupling_iters=row.coupling_iters,
                newton_total=row.newton_total,
            )
    return CaseResult(row=row, ledger=ledger, seconds=seconds, error=error)


def sweep_policies(config: SweepConfig) -> list[BudgetPolicy]:
    """Grid cells row-major over (n_a, n_b), then the adaptive policies."""
    policies: list[BudgetPolicy] = list(config.fixed_policies())
    policies.extend(config.adaptive_policies())
    return policies


async def _run_cases(
    config: SweepConfig, policies: list[BudgetPolicy], workers: int, timing: bool
) -> list[CaseResult]:
    limiter = anyio.CapacityLimiter(workers)
    results: list[CaseResult | None] = [None] * len(policies)

    async def _one(index: int, policy: BudgetPolicy) -> None:
        results[index] = await anyio.to_thread.run_sync(
            partial(run_case, config, policy, timing), limiter=limiter
        )

    async with anyio.create_task_group() as tg:
        for index, policy in enumerate(policies):
            tg.start_soon(_one, index, policy)
    return [r for r in results if r is not None]


def run_sweep_cases(
    config: SweepConfig,
    workers: int | None = None,
    timing: bool | None = None,
    metrics: SweepMetrics | None = None,
) -> list[CaseResult]:
    workers = workers or config.workers or settings.sweep_workers
    timing = config.output.timing if timing is None else timing
    policies = sweep_policies(config)
    logger.info("sweep_start", name=config.name, cells=len(policies), workers=workers)
    cases = anyio.run(_run_cases, config, policies, max(1, workers), timing)
    if metrics is not None:
        for case in cases:
            metrics.observe(case.row, case.seconds)
    return cases


def run_sweep(
    config: SweepConfig,
    workers: int | None = None,
    timing: bool | None = None,
    metrics: SweepMetrics | None = None,
) -> list[SweepResultRow]:
    return [case.row for case in run_sweep_cases(config, workers, timing, metrics)]
