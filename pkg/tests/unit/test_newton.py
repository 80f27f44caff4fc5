import numpy as np
import pytest
from scipy.optimize import bisect

from couplab.core.interface import InterfaceField, Role
from couplab.errors import (
    ContractViolationError,
    NewtonNonConvergenceError,
    SingularJacobianError,
)
from couplab.subsolver.budget import BudgetKind, NewtonBudget
from couplab.models.mp1 import Mp1FluidKernel, Mp1Params
from couplab.subsolver.contract import NewtonSubSolver, call_solver
from couplab.subsolver.newton import finite_difference_jacobian, newton_increment, newton_solve


def cubic(x):
    return x + x**3 - 2.0


def cubic_jac(x):
    return np.diag(1.0 + 3.0 * x**2)


def solve(budget, x0=0.0, eps=1e-10, cap=50, **kwargs):
    return newton_solve(cubic, cubic_jac, np.array([x0]), budget, eps, cap, **kwargs)


class TestNewtonBudget:
    """Budget construction and allowances."""

    def test_from_count(self):
        assert NewtonBudget.from_count(3) == NewtonBudget.finite(3)
        assert NewtonBudget.from_count(float("inf")).kind is BudgetKind.UNTIL_CONVERGED

    def test_allowance_respects_cap(self):
        assert NewtonBudget.finite(10).allowance(4) == 4
        assert NewtonBudget.until_converged().allowance(7) == 7

    def test_invalid_budgets(self):
        with pytest.raises(ContractViolationError):
            NewtonBudget.finite(0)
        with pytest.raises(ContractViolationError):
            NewtonBudget.until_output_stable(0.0)

    def test_str(self):
        assert str(NewtonBudget.finite(2)) == "Finite(2)"
        assert str(NewtonBudget.until_converged()) == "UntilConverged"


class TestNewtonSolve:
    """Budgeted damped Newton on small scalar problems."""

    def test_single_iteration_from_zero(self):
        x, result = solve(NewtonBudget.finite(1), line_search=False)
        assert x[0] == pytest.approx(2.0)
        assert result.newton_iters == 1
        assert not result.converged
        assert result.stop_reason == "budget"

    def test_until_converged_matches_bisection(self):
        root = bisect(lambda d: d + d**3 - 2.0, 0.0, 2.0, xtol=1e-14)
        x, result = solve(NewtonBudget.until_converged())
        assert result.converged
        assert x[0] == pytest.approx(root, abs=1e-9)
        assert x[0] == pytest.approx(1.0, abs=1e-9)

    def test_converged_at_entry_costs_nothing(self):
        x, result = solve(NewtonBudget.finite(3), x0=1.0)
        assert result.newton_iters == 0
        assert result.converged
        assert x[0] == 1.0

    def test_budget_is_respected(self):
        for n in (1, 2, 3):
            _, result = solve(NewtonBudget.finite(n), x0=5.0)
            assert result.newton_iters <= n

    def test_quadratic_convergence_near_root(self):
        _, result = solve(NewtonBudget.until_converged(), x0=3.0, eps=1e-14)
        history = result.residual_history
        pairs = [
            (a, b) for a, b in zip(history, history[1:], strict=False) if a < 0.1 and b > 1e-13
        ]
        assert pairs
        for a, b in pairs:
            assert b <= 10.0 * a * a

    def test_cap_raises_for_until_converged(self):
        with pytest.raises(NewtonNonConvergenceError) as excinfo:
            solve(NewtonBudget.until_converged(), x0=5.0, cap=1)
        assert excinfo.value.iterations == 1

    def test_output_stable_needs_output_function(self):
        with pytest.raises(ContractViolationError):
            solve(NewtonBudget.until_output_stable(1e-4))

    def test_output_stable_never_exceeds_until_converged(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            target = rng.uniform(-5.0, 5.0)
            x0 = np.array([rng.uniform(-3.0, 3.0)])

            def res(x, target=target):
                return x + x**3 - target

            _, full = newton_solve(res, cubic_jac, x0, NewtonBudget.until_converged(), 1e-10, 100)
            _, early = newton_solve(
                res,
                cubic_jac,
                x0,
                NewtonBudget.until_output_stable(1e-4),
                1e-10,
                100,
                output_fn=lambda x: x,
            )
            assert early.newton_iters <= full.newton_iters


def non_increasing(history):
    return all(b <= a for a, b in zip(history, history[1:], strict=False))


class TestLineSearch:
    """Backtracking on ||r|| keeps Newton from cycling or overshooting."""

    def test_overshoot_is_halved(self):
        x, result = solve(NewtonBudget.finite(1))
        assert x[0] == 1.0
        assert result.newton_iters == 1
        assert result.converged

    def test_tanh_does_not_cycle(self):
        x, result = newton_solve(
            np.tanh,
            lambda x: np.diag(1.0 / np.cosh(x) ** 2),
            np.array([1.5]),
            NewtonBudget.until_converged(),
            1e-12,
            50,
        )
        assert result.converged
        assert abs(x[0]) < 1e-10
        assert non_increasing(result.residual_history)

    def test_strongly_coupled_fluid_converges(self):
        solver = NewtonSubSolver(Mp1FluidKernel(Mp1Params(m=8, mu=1.0)), dt=0.01, cap=50)
        d = InterfaceField(np.array([2.0, -1.5, 3.0, 0.5, -2.5, 1.0, 2.0, -3.0]), Role.DISPLACEMENT_LIKE)
        report = call_solver(solver, d, NewtonBudget.until_converged(), 1e-10)
        assert report.single_field_converged
        assert report.residual_norm < 1e-10
        assert non_increasing(report.residual_history)


class TestConfirmOnEntry:
    """Only the residual check opening an iteration may report convergence."""

    @staticmethod
    def linear(budget, x0=0.0, **kwargs):
        return newton_solve(
            lambda x: x - 1.0,
            lambda x: np.eye(1),
            np.array([x0]),
            budget,
            1e-10,
            50,
            confirm_on_entry=True,
            **kwargs,
        )

    def test_last_budgeted_step_does_not_count(self):
        x, result = self.linear(NewtonBudget.finite(1))
        assert x[0] == 1.0
        assert result.residual_norm == 0.0
        assert not result.converged
        assert result.stop_reason == "budget"

    def test_next_call_confirms_for_free(self):
        _, result = self.linear(NewtonBudget.finite(1), x0=1.0)
        assert result.newton_iters == 0
        assert result.converged

    def test_check_inside_the_budget_counts(self):
        _, result = self.linear(NewtonBudget.finite(2))
        assert result.newton_iters == 1
        assert result.converged

    def test_until_converged_unaffected(self):
        _, result = self.linear(NewtonBudget.until_converged())
        assert result.newton_iters == 1
        assert result.converged

    def test_iterates_match_plain_budget(self):
        x_plain, _ = solve(NewtonBudget.finite(2), x0=3.0)
        x_entry, _ = solve(NewtonBudget.finite(2), x0=3.0, confirm_on_entry=True)
        assert np.array_equal(x_plain, x_entry)


class TestNewtonIncrement:
    """Linear solves of the Newton correction."""

    def test_solves_system(self):
        jac = np.array([[4.0, 1.0], [2.0, 3.0]])
        r = np.array([1.0, 2.0])
        assert np.allclose(jac @ newton_increment(jac, r), r)

    def test_singular(self):
        with pytest.raises(SingularJacobianError):
            newton_increment(np.zeros((2, 2)), np.ones(2))

    def test_singular_during_solve(self):
        with pytest.raises(SingularJacobianError):
            newton_solve(
                lambda x: x**2 + 1.0,
                lambda x: np.diag(2.0 * x),
                np.array([0.0]),
                NewtonBudget.finite(1),
                1e-10,
                10,
            )


def test_finite_difference_jacobian():
    x = np.array([0.3, -1.2])
    fd = finite_difference_jacobian(lambda v: np.array([v[0] * v[1], v[0] ** 3]), x)
    expected = np.array([[x[1], x[0]], [3 * x[0] ** 2, 0.0]])
    assert np.allclose(fd, expected, atol=1e-6)
