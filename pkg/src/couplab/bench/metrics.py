from __future__ import annotations

from pathlib import Path

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

from .results import SweepResultRow


class SweepMetrics:
    """Counters of one sweep, kept in a private registry."""

    def __init__(self) -> None:
        self.registry = CollectorRegistry()
        self.coupling_iterations = Counter(
            "couplab_coupling_iterations_total",
            "Coupling iterations per sweep cell",
            ["cell"],
            registry=self.registry,
        )
        self.newton_iterations = Counter(
            "couplab_newton_iterations_total",
            "Newton iterations per sweep cell and sub-solver",
            ["cell", "solver"],
            registry=self.registry,
        )
        self.cells = Counter(
            "couplab_cells_total", "Sweep cells by outcome", ["status"], registry=self.registry
        )
        self.cell_seconds = Histogram(
            "couplab_cell_seconds", "Wall time per sweep cell", registry=self.registry
        )

    def observe(self, row: SweepResultRow, seconds: float) -> None:
        cell = row.label
        self.coupling_iterations.labels(cell=cell).inc(row.coupling_iters)
        self.newton_iterations.labels(cell=cell, solver="f").inc(row.newton_f)
        self.newton_iterations.labels(cell=cell, solver="s").inc(row.newton_s)
        self.cells.labels(status="converged" if row.converged else "failed").inc()
        self.cell_seconds.observe(seconds)

    def value(self, name: str, labels: dict[str, str] | None = None) -> float | None:
        return self.registry.get_sample_value(name, labels or {})

    def write(self, path: str | Path) -> None:
        write_to_textfile(str(path), self.registry)
