"""Aitken dynamic relaxation on the interface residual r = x_tilde - x."""

from __future__ import annotations

import numpy as np

from ..core.interface import InterfaceField
from ..errors import ContractViolationError
from .relaxation import relax_constant

OMEGA_MIN = 0.01
OMEGA_MAX = 2.0


def aitken_omega(
    omega_prev: float,
    r_prev: InterfaceField,
    r_curr: InterfaceField,
    omega_min: float = OMEGA_MIN,
    omega_max: float = OMEGA_MAX,
) -> float:
    """-omega_prev * <r_prev, r_curr - r_prev> / ||r_curr - r_prev||^2, clamped."""
    if len(r_prev) != len(r_curr):
        raise ContractViolationError(
            f"Interface length mismatch: {len(r_prev)} != {len(r_curr)}"
        )
    delta = r_curr.values - r_prev.values
    denom = float(delta @ delta)
    if denom == 0.0:
        return omega_prev
    omega = -omega_prev * float(r_prev.values @ delta) / denom
    return float(np.clip(omega, omega_min, omega_max))


class AitkenRelaxation:
    name = "aitken"

    def __init__(
        self, omega0: float = 0.5, omega_min: float = OMEGA_MIN, omega_max: float = OMEGA_MAX
    ) -> None:
        if not 0.0 < omega_min <= omega_max:
            raise ContractViolationError("Aitken needs 0 < omega_min <= omega_max")
        if not omega_min <= omega0 <= omega_max:
            raise ContractViolationError(
                f"Aitken omega0 {omega0} outside [{omega_min}, {omega_max}]"
            )
        self.omega0 = omega0
        self.omega_min = omega_min
        self.omega_max = omega_max
        self.omega = omega0
        self.last_update_fell_back = False
        self._r_prev: InterfaceField | None = None

    def begin_step(self) -> None:
        self.omega = self.omega0
        self._r_prev = None

    def update(self, x_k: InterfaceField, x_tilde_k: InterfaceField) -> InterfaceField:
        r = x_tilde_k.with_values(x_tilde_k.values - x_k.values)
        if self._r_prev is not None:
            self.omega = aitken_omega(
                self.omega, self._r_prev, r, self.omega_min, self.omega_max
            )
        self._r_prev = r
        return relax_constant(x_k, x_tilde_k, self.omega)

    def end_step(self) -> None:
        self._r_prev = None
