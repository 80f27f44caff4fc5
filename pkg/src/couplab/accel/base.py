from __future__ import annotations

from typing import Any, Protocol

from ..core.interface import InterfaceField
from ..errors import ContractViolationError
from .aitken import AitkenRelaxation
from .iqn import IqnIls
from .relaxation import ConstantRelaxation


class Accelerator(Protocol):
    """Interface update x^{k+1} from (x^k, x_tilde^k), with per-step hooks."""

    name: str

    @property
    def last_update_fell_back(self) -> bool: ...

    def begin_step(self) -> None: ...

    def update(self, x_k: InterfaceField, x_tilde_k: InterfaceField) -> InterfaceField: ...

    def end_step(self) -> None: ...


ACCELERATORS: dict[str, type] = {
    "constant": ConstantRelaxation,
    "aitken": AitkenRelaxation,
    "iqn-ils": IqnIls,
}


def build_accelerator(kind: str, **params: Any) -> Accelerator:
    """Fresh accelerator; every coupled run needs its own instance."""
    try:
        cls = ACCELERATORS[kind]
    except KeyError:
        raise ContractViolationError(
            f"Unknown accelerator {kind!r}; expected one of {sorted(ACCELERATORS)}"
        ) from None
    accel: Accelerator = cls(**params)
    return accel
