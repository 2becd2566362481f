"""Parameter sweeps, output emission and randomized verification."""

from .emit import emit, emit_to_path, read_csv, read_jsonl
from .engine import RowError, columns, run_sweep
from .spec import Experiment, OutputFormat, SpecError, SweepSpec, build_spec, read_config
from .verify import SuiteResult, run_verification

__all__ = [
    "Experiment", "OutputFormat", "RowError", "SpecError", "SuiteResult", "SweepSpec",
    "build_spec", "columns", "emit", "emit_to_path", "read_config", "read_csv", "read_jsonl",
    "run_sweep", "run_verification",
]
