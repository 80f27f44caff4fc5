from __future__ import annotations

import numpy as np

from ..core.interface import InterfaceField
from ..errors import ContractViolationError


def relax_constant(x_k: InterfaceField, x_tilde_k: InterfaceField, omega: float) -> InterfaceField:
    """x + omega * (x_tilde - x); a fixed point x_tilde == x is returned exactly."""
    if len(x_k) != len(x_tilde_k):
        raise ContractViolationError(
            f"Interface length mismatch: {len(x_k)} != {len(x_tilde_k)}"
        )
    if not (np.isfinite(omega) and omega > 0):
        raise ContractViolationError(f"Relaxation factor must be positive, got {omega}")
    if omega == 1.0:
        return x_tilde_k.with_values(x_tilde_k.values.copy())
    return x_tilde_k.with_values(x_k.values + omega * (x_tilde_k.values - x_k.values))


class ConstantRelaxation:
    """Fixed under-relaxation, omega in (0, 1]."""

    name = "constant"

    def __init__(self, omega: float = 1.0) -> None:
        if not 0.0 < omega <= 1.0:
            raise ContractViolationError(f"Constant relaxation needs 0 < omega <= 1, got {omega}")
        self.omega = omega
        self.last_update_fell_back = False

    def begin_step(self) -> None:
        pass

    def update(self, x_k: InterfaceField, x_tilde_k: InterfaceField) -> InterfaceField:
        return relax_constant(x_k, x_tilde_k, self.omega)

    def end_step(self) -> None:
        pass
