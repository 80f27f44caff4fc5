from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import ContractViolationError, NumericError


class Role(str, Enum):
    DISPLACEMENT_LIKE = "displacement_like"
    TRACTION_LIKE = "traction_like"


@dataclass(frozen=True)
class InterfaceField:
    """Flat vector of interface degrees of freedom tagged with its coupling role."""

    values: np.ndarray
    role: Role

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float).reshape(-1)
        if arr.size < 1:
            raise ContractViolationError("InterfaceField needs at least one entry")
        if not np.all(np.isfinite(arr)):
            raise NumericError(f"Non-finite entries in {self.role.value} interface field")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)

    def with_values(self, values: np.ndarray) -> InterfaceField:
        return InterfaceField(values, self.role)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def _check_pair(a: InterfaceField, b: InterfaceField) -> None:
    if len(a) != len(b):
        raise ContractViolationError(f"Interface length mismatch: {len(a)} != {len(b)}")


def relative_change(prev: InterfaceField, curr: InterfaceField, floor: float) -> float:
    """||curr - prev||_2 / max(||curr||_2, floor)."""
    if floor <= 0:
        raise ContractViolationError("relative_change floor must be positive")
    _check_pair(prev, curr)
    diff = float(np.linalg.norm(curr.values - prev.values))
    if not np.isfinite(diff):
        raise NumericError("Non-finite relative change")
    return diff / max(curr.norm(), floor)
