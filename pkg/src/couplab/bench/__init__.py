from .config import SWEEP_SCHEMA, SweepConfig, config_from_dict, load_config
from .heatmap import emit_heatmap
from .metrics import SweepMetrics
from .optima import OptimaSummary, find_optima
from .reference import identity_violations, reference_rows
from .results import CSV_HEADER, SweepResultRow, read_csv, write_csv, write_steps_csv
from .sweep import CaseResult, run_case, run_sweep, run_sweep_cases

__all__ = [
    "CSV_HEADER",
    "CaseResult",
    "OptimaSummary",
    "SWEEP_SCHEMA",
    "SweepConfig",
    "SweepMetrics",
    "SweepResultRow",
    "config_from_dict",
    "emit_heatmap",
    "find_optima",
    "identity_violations",
    "load_config",
    "read_csv",
    "reference_rows",
    "run_case",
    "run_sweep",
    "run_sweep_cases",
    "write_csv",
    "write_steps_csv",
]
