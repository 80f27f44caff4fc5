import math

import pytest

from couplab.bench.heatmap import cell_fractions, emit_heatmap, metric_grid
from couplab.bench.metrics import SweepMetrics
from couplab.bench.optima import find_optima
from couplab.bench.reference import grid_rows, identity_violations, policy_rows, reference_rows
from couplab.bench.results import CSV_HEADER, SweepResultRow, read_csv, write_csv, write_steps_csv
from couplab.core.ledger import CouplingRecord, IterationLedger
from couplab.errors import ConfigError, ContractViolationError, IncompleteGridError


def row(n_f=None, n_s=None, policy="", coupling=10, newton_f=5, newton_s=5, converged=True):
    return SweepResultRow(
        n_f=n_f,
        n_s=n_s,
        policy=policy,
        coupling_iters=coupling,
        newton_f=newton_f,
        newton_s=newton_s,
        newton_total=newton_f + newton_s,
        cost=float(newton_f + newton_s),
        converged=converged,
    )


class TestResultCsv:
    """Result rows on disk."""

    def test_round_trip(self, tmp_path):
        rows = [
            row(1, math.inf),
            row(policy="N1-CC", converged=False),
            row(2, 2).model_copy(update={"converged_steps": 20}),
        ]
        path = tmp_path / "results.csv"
        write_csv(rows, path)
        assert read_csv(path) == rows

    def test_layout(self, tmp_path):
        path = tmp_path / "results.csv"
        write_csv([row(2, math.inf, newton_f=3, newton_s=4)], path)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert lines[1] == "2,inf,,10,3,4,7,7.0,true,,0.0"

    def test_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_csv([], path)
        assert path.read_text() == ",".join(CSV_HEADER) + "\n"
        assert read_csv(path) == []

    def test_unexpected_header(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ConfigError, match="header"):
            read_csv(path)

    def test_malformed_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(",".join(CSV_HEADER) + "\n1,1,,ten,1,1,2,2.0,true,,0.0\n")
        with pytest.raises(ConfigError, match="malformed"):
            read_csv(path)

    def test_steps_csv(self, tmp_path):
        ledger = IterationLedger()
        ledger.open_step(0, 0.01)
        ledger.record(CouplingRecord(2, 1, 1.0, 1.0))
        ledger.record(CouplingRecord(0, 0, 0.0, 0.0))
        ledger.close_step(True)
        path = tmp_path / "steps.csv"
        write_steps_csv([(row(1, 1).key, ledger), ("N1-CC", ledger)], path)
        lines = path.read_text().splitlines()
        assert lines[0] == "cell,step,time,coupling_iters,newton_f,newton_s,converged"
        assert lines[1] == "1x1,0,0.01,2,2,1,true"
        assert lines[2] == "N1-CC,0,0.01,2,2,1,true"
        assert all(line.count(",") == 6 for line in lines)

    def test_steps_csv_rejects_comma_keys(self, tmp_path):
        path = tmp_path / "steps.csv"
        with pytest.raises(ContractViolationError):
            write_steps_csv([("(1,1)", IterationLedger())], path)
        assert not path.exists()

    @pytest.mark.parametrize("writer", [write_csv, write_steps_csv])
    def test_unwritable_path_names_the_file(self, tmp_path, writer):
        path = tmp_path / "missing" / "out.csv"
        with pytest.raises(OSError, match="missing"):
            writer([], path)

    def test_converged_steps_column(self, tmp_path):
        path = tmp_path / "results.csv"
        write_csv([row(1, 1).model_copy(update={"converged_steps": 20})], path)
        lines = path.read_text().splitlines()
        assert "converged_steps" in lines[0].split(",")
        assert lines[1] == "1,1,,10,5,5,10,10.0,true,20,0.0"
        assert read_csv(path)[0].converged_steps == 20

    def test_labels(self):
        assert row(1, math.inf).label == "(1,inf)"
        assert row(1, math.inf).key == "1xinf"
        assert row(policy="CID").key == "CID"
        assert row(policy="CID").label == "CID"
        assert row(policy="CID").cell is None


class TestFindOptima:
    """Argmin cells and the Pareto set."""

    def test_weak_reference(self):
        summary = find_optima(grid_rows("weak"))
        assert summary.newton_total.value == 2109
        assert summary.newton_total.cells == ["(1,1)"]
        assert summary.coupling_iters.value == 718
        assert len(summary.coupling_iters.cells) == 12
        assert "(1,1)" in summary.pareto

    def test_strong_reference(self):
        summary = find_optima(grid_rows("strong"))
        assert summary.newton_total.cells == ["(1,1)"]
        assert summary.newton_total.value == 1166
        assert summary.coupling_iters.cells == ["(inf,3)"]
        assert summary.coupling_iters.value == 333

    def test_ties_in_row_order(self):
        rows = [row(1, 1, coupling=5), row(1, 2, coupling=5), row(2, 1, coupling=7)]
        assert find_optima(rows).coupling_iters.cells == ["(1,1)", "(1,2)"]

    def test_single_row(self):
        summary = find_optima([row(1, 1)])
        assert summary.newton_total.cells == ["(1,1)"]
        assert summary.pareto == ["(1,1)"]

    def test_expensive_fluid_moves_cost_optimum(self):
        # cost = 10 * newton_f + newton_s
        rows = [row(1, 1, newton_f=6, newton_s=6), row(1, 3, newton_f=4, newton_s=12)]
        rows = [r.model_copy(update={"cost": 10.0 * r.newton_f + r.newton_s}) for r in rows]
        summary = find_optima(rows)
        assert summary.newton_total.cells == ["(1,1)"]
        assert summary.cost.cells == ["(1,3)"]
        assert summary.cost.value == 52.0

    def test_failed_rows_do_not_compete(self):
        rows = [row(1, 1, newton_f=1, newton_s=1, converged=False), row(2, 2)]
        summary = find_optima(rows)
        assert summary.newton_total.cells == ["(2,2)"]
        assert summary.considered == 1

    def test_empty(self):
        with pytest.raises(ContractViolationError):
            find_optima([])


class TestReference:
    """Published counts kept as data."""

    def test_sizes(self):
        assert len(grid_rows("strong")) == 36
        assert len(grid_rows("weak")) == 24
        assert [r.policy for r in policy_rows("weak")] == ["N1-CC", "N3-CC", "CID"]
        assert len(reference_rows("strong")) == 39

    def test_strong_identity_violations(self):
        violations = identity_violations(grid_rows("strong"))
        assert violations == ["(1,1)", "(1,2)", "(1,3)", "(1,4)", "(1,5)", "(1,inf)", "(inf,2)"]

    def test_weak_identity_holds(self):
        assert identity_violations(reference_rows("weak")) == []

    def test_weak_totals_are_stored_verbatim(self):
        totals = {r.label: r.newton_total for r in grid_rows("weak")}
        assert totals["(1,1)"] == 2109
        assert totals["(2,1)"] == 2702
        assert totals["(5,2)"] == 4307
        assert totals["(inf,inf)"] == 4517

    def test_unknown_case(self):
        with pytest.raises(ContractViolationError):
            grid_rows("medium")


class TestHeatmap:
    """Grid extraction and SVG output."""

    def test_grid_axes(self):
        n_f, n_s, values = metric_grid(grid_rows("weak"), "newton")
        assert n_f == [1, 2, 3, 4, 5, math.inf]
        assert n_s == [1, 2, 3, math.inf]
        assert values[0, 0] == 2109

    def test_darkest_cell_is_minimum(self):
        _, _, values = metric_grid(grid_rows("weak"), "newton")
        fractions = cell_fractions(values)
        assert fractions[0, 0] == 0.0
        assert fractions.max() == 1.0

    def test_constant_grid(self):
        rows = [row(a, b) for a in (1, 2) for b in (1, 2)]
        _, _, values = metric_grid(rows, "coupling")
        assert (cell_fractions(values) == 0.5).all()

    def test_incomplete_grid(self):
        rows = [r for r in grid_rows("strong") if r.label != "(2,3)"]
        with pytest.raises(IncompleteGridError) as excinfo:
            metric_grid(rows, "newton")
        assert excinfo.value.missing == ["(2,3)"]

    def test_policy_rows_are_ignored(self):
        n_f, n_s, _ = metric_grid(reference_rows("weak"), "cost")
        assert len(n_f) * len(n_s) == 24

    def test_unknown_metric(self):
        with pytest.raises(ContractViolationError):
            metric_grid(grid_rows("weak"), "time")

    def test_svg_written(self, tmp_path):
        path = tmp_path / "weak.svg"
        emit_heatmap(grid_rows("weak"), "newton", path)
        text = path.read_text()
        assert text.lstrip().startswith("<?xml") or "<svg" in text
        assert "2109" in text

    def test_single_cell(self, tmp_path):
        path = tmp_path / "one.svg"
        emit_heatmap([row(1, 1)], "coupling", path)
        assert "<svg" in path.read_text()

    def test_deterministic_output(self, tmp_path):
        first, second = tmp_path / "a.svg", tmp_path / "b.svg"
        emit_heatmap(grid_rows("strong"), "coupling", first)
        emit_heatmap(grid_rows("strong"), "coupling", second)
        assert first.read_bytes() == second.read_bytes()


class TestSweepMetrics:
    """Prometheus counters of a sweep."""

    def test_observe(self, tmp_path):
        metrics = SweepMetrics()
        metrics.observe(row(1, 1, coupling=4, newton_f=3, newton_s=2), 0.5)
        metrics.observe(row(policy="CID", converged=False), 0.1)
        assert metrics.value("couplab_coupling_iterations_total", {"cell": "(1,1)"}) == 4
        assert metrics.value("couplab_newton_iterations_total", {"cell": "(1,1)", "solver": "s"}) == 2
        assert metrics.value("couplab_cells_total", {"status": "failed"}) == 1
        assert metrics.value("couplab_cell_seconds_count") == 2

        path = tmp_path / "sweep.prom"
        metrics.write(path)
        assert "couplab_cells_total" in path.read_text()
