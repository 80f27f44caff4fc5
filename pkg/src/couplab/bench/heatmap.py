"""Static SVG heatmaps of a fixed-budget grid."""

from __future__ import annotations

import math
from collections.abc import Sequence
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from ..errors import ContractViolationError, IncompleteGridError
from .config import format_grid_value
from .results import SweepResultRow

METRICS = {
    "coupling": ("coupling_iters", "Coupling iterations"),
    "newton": ("newton_total", "Total Newton iterations"),
    "cost": ("cost", "Estimated cost"),
}
COLORMAP = "viridis"


def _axis_label(value: int | float) -> str:
    return "∞" if math.isinf(value) else str(int(value))


def metric_grid(
    rows: Sequence[SweepResultRow], metric: str
) -> tuple[list[int | float], list[int | float], np.ndarray]:
    """(n_f axis, n_s axis, values[i_f, i_s]) from the fixed-budget rows."""
    if metric not in METRICS:
        raise ContractViolationError(f"Unknown metric {metric!r}; expected one of {sorted(METRICS)}")
    attr = METRICS[metric][0]
    cells = {r.cell: float(getattr(r, attr)) for r in rows if r.is_fixed and r.cell is not None}
    if not cells:
        raise ContractViolationError("Heatmap needs at least one fixed-budget row")

    n_f = sorted({c[0] for c in cells})
    n_s = sorted({c[1] for c in cells})
    missing = [
        f"({format_grid_value(a)},{format_grid_value(b)})"
        for a in n_f
        for b in n_s
        if (a, b) not in cells
    ]
    if missing:
        raise IncompleteGridError(missing)
    values = np.array([[cells[(a, b)] for b in n_s] for a in n_f])
    return n_f, n_s, values


def cell_fractions(values: np.ndarray) -> np.ndarray:
    """Linear ramp onto [0, 1]; a constant grid maps to the midpoint."""
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return np.full(values.shape, 0.5)
    return (values - lo) / (hi - lo)


def emit_heatmap(rows: Sequence[SweepResultRow], metric: str, path: str | Path) -> None:
    n_f, n_s, values = metric_grid(rows, metric)
    fractions = cell_fractions(values)
    cmap = matplotlib.colormaps[COLORMAP]
    colors = cmap(fractions)

    fig = Figure(figsize=(1.0 + 0.9 * len(n_s), 1.0 + 0.8 * len(n_f)))
    ax = fig.add_subplot()
    ax.imshow(colors, origin="upper", aspect="auto")
    ax.set_xticks(range(len(n_s)), [_axis_label(v) for v in n_s])
    ax.set_yticks(range(len(n_f)), [_axis_label(v) for v in n_f])
    ax.set_xlabel("N_s (Newton iterations per call, B)")
    ax.set_ylabel("N_f (Newton iterations per call, A)")
    ax.set_title(METRICS[metric][1])
    for i in range(len(n_f)):
        for j in range(len(n_s)):
            text_color = "white" if fractions[i, j] < 0.5 else "black"
            ax.text(j, i, f"{values[i, j]:g}", ha="center", va="center", color=text_color, fontsize=8)
    fig.tight_layout()

    with matplotlib.rc_context({"svg.hashsalt": "couplab", "svg.fonttype": "none"}):
        fig.savefig(Path(path), format="svg", metadata={"Date": None})
