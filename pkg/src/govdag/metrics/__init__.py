from govdag.metrics.aggregate import (
    TAU_SUCC,
    DerivedMetrics,
    ScoreReport,
    aggregate,
    derived,
    is_success,
    with_derived,
)
from govdag.metrics.report import read_run_log, render_table, report_to_json, write_run_log

__all__ = [
    "TAU_SUCC",
    "DerivedMetrics",
    "ScoreReport",
    "aggregate",
    "derived",
    "is_success",
    "read_run_log",
    "render_table",
    "report_to_json",
    "with_derived",
    "write_run_log",
]
