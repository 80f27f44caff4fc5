"""
Interface quasi-Newton with least-squares Jacobian approximation (IQN-ILS).

Each coupling iteration contributes one pair of difference columns,
V: r_k - r_{k-1} and W: x_tilde_k - x_tilde_{k-1}, with r = x_tilde - x.
The update is x_tilde_k + W alpha where alpha minimises ||V alpha + r_k||_2.
Columns from up to ``reuse_steps`` previous time steps stay in the pool.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import structlog
from scipy.linalg import qr, solve_triangular

from ..core.interface import InterfaceField
from ..errors import ContractViolationError
from .relaxation import relax_constant

logger = structlog.get_logger(__name__)


@dataclass
class IqnColumn:
    v: np.ndarray
    w: np.ndarray
    age: int = 0  # time steps since the column was collected


@dataclass
class IqnState:
    reuse_steps: int = 4
    columns: list[IqnColumn] = field(default_factory=list)  # newest first
    prev_residual: np.ndarray | None = None
    prev_output: np.ndarray | None = None
    k: int = 0
    fell_back: bool = False

    def __post_init__(self) -> None:
        if self.reuse_steps < 0:
            raise ContractViolationError("reuse_steps must be >= 0")

    @property
    def n_columns(self) -> int:
        return len(self.columns)

    def begin_step(self) -> None:
        self.prev_residual = None
        self.prev_output = None
        self.k = 0


def _filter_columns(state: IqnState, rows: int, eps: float) -> int:
    """Drop surplus and near-dependent columns from the state; returns how many were filtered."""
    del state.columns[rows:]
    filtered = 0
    while state.columns:
        v = np.column_stack([c.v for c in state.columns])
        r_fac = qr(v, mode="r")[0]
        diag = np.abs(np.diag(r_fac))
        norm = float(np.linalg.norm(r_fac))
        if norm == 0.0:
            filtered += len(state.columns)
            state.columns.clear()
            break
        small = np.flatnonzero(diag < eps * norm)
        if small.size == 0:
            break
        del state.columns[int(small[0])]
        filtered += 1
    return filtered


def iqn_update(
    state: IqnState,
    x_k: InterfaceField,
    x_tilde_k: InterfaceField,
    qr_filter_eps: float = 1e-8,
    fallback_omega: float = 0.5,
) -> InterfaceField:
    """Next interface iterate; ``state`` is updated in place.

    Without usable columns the update falls back to constant relaxation with
    ``fallback_omega`` and sets ``state.fell_back``.
    """
    if len(x_k) != len(x_tilde_k):
        raise ContractViolationError(
            f"Interface length mismatch: {len(x_k)} != {len(x_tilde_k)}"
        )
    if state.prev_residual is not None and state.prev_residual.size != len(x_k):
        raise ContractViolationError("Interface length changed within an IQN run")

    residual = x_tilde_k.values - x_k.values
    output = x_tilde_k.values.copy()
    if state.prev_residual is not None and state.prev_output is not None:
        state.columns.insert(
            0, IqnColumn(v=residual - state.prev_residual, w=output - state.prev_output)
        )
    state.prev_residual = residual
    state.prev_output = output
    state.k += 1

    filtered = _filter_columns(state, residual.size, qr_filter_eps)
    if filtered:
        logger.debug("iqn_filtered_columns", filtered=filtered, kept=state.n_columns)

    if not state.columns:
        state.fell_back = True
        return relax_constant(x_k, x_tilde_k, fallback_omega)

    state.fell_back = False
    v = np.column_stack([c.v for c in state.columns])
    w = np.column_stack([c.w for c in state.columns])
    q_fac, r_fac = qr(v, mode="economic")
    alpha = solve_triangular(r_fac, -(q_fac.T @ residual))
    return x_tilde_k.with_values(output + w @ alpha)


def iqn_advance_step(state: IqnState) -> IqnState:
    """Age the pool by one time step and drop columns older than reuse_steps."""
    for col in state.columns:
        col.age += 1
    state.columns = [c for c in state.columns if c.age <= state.reuse_steps]
    state.begin_step()
    return state


class IqnIls:
    name = "iqn-ils"

    def __init__(
        self, reuse_steps: int = 4, qr_filter_eps: float = 1e-8, fallback_omega: float = 0.5
    ) -> None:
        if qr_filter_eps <= 0:
            raise ContractViolationError("qr_filter_eps must be positive")
        if not 0.0 < fallback_omega <= 1.0:
            raise ContractViolationError("fallback_omega must lie in (0, 1]")
        self.state = IqnState(reuse_steps=reuse_steps)
        self.qr_filter_eps = qr_filter_eps
        self.fallback_omega = fallback_omega

    @property
    def last_update_fell_back(self) -> bool:
        return self.state.fell_back

    def begin_step(self) -> None:
        self.state.begin_step()

    def update(self, x_k: InterfaceField, x_tilde_k: InterfaceField) -> InterfaceField:
        return iqn_update(
            self.state, x_k, x_tilde_k, self.qr_filter_eps, self.fallback_omega
        )

    def end_step(self) -> None:
        self.state = iqn_advance_step(self.state)
