import numpy as np
import pytest

from couplab.core.interface import InterfaceField, Role
from couplab.errors import ContractViolationError
from couplab.models.mp1 import Mp1FluidKernel, Mp1Params, Mp1StructureKernel
from couplab.subsolver.budget import NewtonBudget
from couplab.subsolver.contract import NewtonSubSolver, call_solver


def displacement(values):
    return InterfaceField(np.asarray(values, dtype=float), Role.DISPLACEMENT_LIKE)


def fluid_solver(params=None):
    return NewtonSubSolver(Mp1FluidKernel(params or Mp1Params(m=4)), dt=0.01, cap=50)


class TestNewtonSubSolver:
    """Resumable sub-solver calls behind the black-box contract."""

    def test_split_calls_match_single_call(self):
        d = displacement([0.3, -0.2, 0.5, 0.1])
        split = fluid_solver()
        for _ in range(3):
            call_solver(split, d, NewtonBudget.finite(1), 1e-14)
        whole = fluid_solver()
        call_solver(whole, d, NewtonBudget.finite(3), 1e-14)
        assert np.array_equal(split.state, whole.state)

    def test_role_is_checked(self):
        solver = fluid_solver()
        wrong = InterfaceField(np.zeros(4), Role.TRACTION_LIKE)
        with pytest.raises(ContractViolationError):
            solver.set_input(wrong)

    def test_length_is_checked(self):
        with pytest.raises(ContractViolationError):
            fluid_solver().set_input(displacement([0.0, 0.0]))

    def test_solve_needs_input(self):
        with pytest.raises(ContractViolationError):
            fluid_solver().solve_call(NewtonBudget.finite(1), 1e-10)

    def test_commit_advances_time(self):
        solver = fluid_solver()
        assert solver.time == pytest.approx(0.01)
        call_solver(solver, displacement(np.zeros(4)), NewtonBudget.until_converged(), 1e-10)
        solver.commit_step()
        assert solver.step_index == 1
        assert solver.time == pytest.approx(0.02)
        assert np.array_equal(solver.committed_state, solver.state)

    def test_report_output_and_residual(self):
        solver = NewtonSubSolver(Mp1StructureKernel(Mp1Params(m=2)), dt=0.01, cap=50)
        traction = InterfaceField(np.array([2.0, 0.0]), Role.TRACTION_LIKE)
        report = call_solver(solver, traction, NewtonBudget.until_converged(), 1e-12)
        assert report.single_field_converged
        assert report.output.role is Role.DISPLACEMENT_LIKE
        assert np.allclose(report.output.values, [1.0, 0.0])
        assert solver.residual_norm() < 1e-12

    def test_invalid_construction(self):
        with pytest.raises(ContractViolationError):
            NewtonSubSolver(Mp1FluidKernel(Mp1Params()), dt=0.0, cap=10)

    def test_fluid_confirms_on_the_next_call(self):
        solver = fluid_solver(Mp1Params(m=2, mu=0.0, alpha=0.0))
        d = displacement([0.0, 0.0])
        first = call_solver(solver, d, NewtonBudget.finite(1), 1e-10)
        assert first.newton_iters == 1
        assert first.residual_norm < 1e-10
        assert not first.single_field_converged
        second = call_solver(solver, d, NewtonBudget.finite(1), 1e-10)
        assert second.newton_iters == 0
        assert second.single_field_converged

    def test_structure_trusts_its_last_step(self):
        solver = NewtonSubSolver(Mp1StructureKernel(Mp1Params(m=2, beta=0.0)), dt=0.01, cap=50)
        traction = InterfaceField(np.array([2.0, 1.0]), Role.TRACTION_LIKE)
        report = call_solver(solver, traction, NewtonBudget.finite(1), 1e-10)
        assert report.newton_iters == 1
        assert report.single_field_converged
