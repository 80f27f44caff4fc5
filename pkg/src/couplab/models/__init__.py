"""Model coupled problems.

Only the kernel interfaces are imported here; the concrete problems live in
``couplab.models.mp1``, ``couplab.models.mp2`` and ``couplab.models.registry``.
"""

from .base import CoupledProblem, FieldKernel, StepContext

__all__ = ["CoupledProblem", "FieldKernel", "StepContext"]
