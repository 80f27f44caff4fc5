import math

import numpy as np
import pytest

from couplab.core.interface import InterfaceField, Role, relative_change
from couplab.errors import ContractViolationError, NumericError


def field(values, role=Role.DISPLACEMENT_LIKE):
    return InterfaceField(np.asarray(values, dtype=float), role)


class TestInterfaceField:
    """Construction and invariants of interface data."""

    def test_values_are_read_only_copies(self):
        raw = np.array([1.0, 2.0])
        f = field(raw)
        raw[0] = 5.0
        assert f.values[0] == 1.0
        with pytest.raises(ValueError):
            f.values[0] = 3.0

    def test_rejects_non_finite(self):
        with pytest.raises(NumericError):
            field([1.0, math.nan])

    def test_rejects_empty(self):
        with pytest.raises(ContractViolationError):
            field([])

    def test_with_values_keeps_role(self):
        f = field([1.0], Role.TRACTION_LIKE).with_values(np.array([2.0]))
        assert f.role is Role.TRACTION_LIKE
        assert len(f) == 1


class TestRelativeChange:
    """Relative L2 change with a floored denominator."""

    def test_identical_fields(self):
        assert relative_change(field([3.0, 4.0]), field([3.0, 4.0]), 1e-12) == 0.0

    def test_hand_computed(self):
        value = relative_change(field([1, 0, 0]), field([1, 0, 0.5]), 1e-12)
        assert value == pytest.approx(0.5 / math.sqrt(1.25))

    def test_floor_applies(self):
        assert relative_change(field([0.1]), field([0.0]), 1.0) == pytest.approx(0.1)

    def test_length_mismatch(self):
        with pytest.raises(ContractViolationError):
            relative_change(field([1.0]), field([1.0, 2.0]), 1e-12)

    def test_floor_must_be_positive(self):
        with pytest.raises(ContractViolationError):
            relative_change(field([1.0]), field([1.0]), 0.0)
