"""
Base interfaces for model coupled problems.

A model exposes each subproblem as a FieldKernel: a discretized single-field
system r(x; input) = 0 with an interface output. Sub-solvers, the monolithic
oracle and the linearized rate analysis are all built from these kernels.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..core.interface import InterfaceField, Role


@dataclass(frozen=True)
class StepContext:
    """Data of the time level being solved for."""

    time: float
    dt: float
    state_old: np.ndarray


class FieldKernel(ABC):
    """One subproblem: state x, interface input, interface output."""

    name: str
    input_role: Role
    output_role: Role
    # only the check opening a Newton iteration may confirm convergence
    confirm_on_entry: bool = False
    line_search: bool = True

    @property
    @abstractmethod
    def state_size(self) -> int: ...

    @property
    @abstractmethod
    def input_size(self) -> int: ...

    @abstractmethod
    def initial_state(self) -> np.ndarray: ...

    @abstractmethod
    def residual(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray: ...

    @abstractmethod
    def jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        """d residual / d x."""

    @abstractmethod
    def input_jacobian(self, x: np.ndarray, inp: np.ndarray, ctx: StepContext) -> np.ndarray:
        """d residual / d input."""

    @abstractmethod
    def output(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def output_jacobian(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        """d output / d x."""

    def output_input_jacobian(self, x: np.ndarray, inp: np.ndarray) -> np.ndarray:
        """d output / d input; zero unless the output reads the input directly."""
        out = self.output(x, inp)
        return np.zeros((out.size, np.asarray(inp).size))


class CoupledProblem(ABC):
    """Black-box pair: kernel A consumes displacement-like data and produces
    traction-like data, kernel B the reverse.

    Kernel B's output must depend on its state only; the monolithic oracle relies on it.
    """

    name: str
    kernel_a: FieldKernel
    kernel_b: FieldKernel

    def interface_from_b(self, x_b: np.ndarray) -> InterfaceField:
        dummy = np.zeros(self.kernel_b.input_size)
        return InterfaceField(self.kernel_b.output(x_b, dummy), Role.DISPLACEMENT_LIKE)

    def initial_interface(self) -> InterfaceField:
        """Displacement-like predictor for the first coupling iteration."""
        return self.interface_from_b(self.kernel_b.initial_state())

    def describe(self) -> dict[str, object]:
        return {"problem": self.name}
