"""Run-log I/O and human/machine rendering of score reports."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from govdag.core.types import RunRecord
from govdag.metrics.aggregate import ScoreReport

_ROWS = (
    ("ATS", "ats", "{:.2f}"),
    ("TSR", "tsr", "{:.2f}"),
    ("CRR", "crr", "{:.2f}"),
    ("Avg. Score", "avg_score", "{:.2f}"),
    ("ADI", "adi", "{:.2f}"),
    ("Avg. Tokens", "avg_tokens", "{:.2f}"),
    ("Total Cost", "total_cost", "{:.4f}"),
    ("Generation Time (s)", "gen_time_s", "{:.2f}"),
    ("Execution Time (s)", "exec_time_s", "{:.2f}"),
    ("Alignment (A)", "alignment", "{:.2f}"),
    ("Contract Gap", "contract_gap", "{:.2f}"),
    ("Debug Efficiency (E)", "debug_efficiency", "{:.2f}"),
    ("Tokens/Success (T*)", "tokens_per_success", "{:.0f}"),
    ("Tasks", "n_tasks", "{:d}"),
)


def read_run_log(path: str | Path) -> list[RunRecord]:
    records = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(RunRecord.from_obj(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad run record: {exc}") from exc
    return records


def write_run_log(path: str | Path, records: Sequence[RunRecord]) -> None:
    lines = [json.dumps(r.to_obj(), sort_keys=True) for r in records]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def _cell(report: ScoreReport, attr: str, fmt: str) -> str:
    value = getattr(report, attr)
    if value is None:
        return "-"
    return fmt.format(value)


def render_table(reports: dict[str, ScoreReport]) -> str:
    """Markdown table; one column per named report, metrics as rows."""
    names = list(reports)
    header = "| Metric | " + " | ".join(names) + " |"
    rule = "|---" * (len(names) + 1) + "|"
    lines = [header, rule]
    for label, attr, fmt in _ROWS:
        cells = " | ".join(_cell(reports[name], attr, fmt) for name in names)
        lines.append(f"| {label} | {cells} |")
    return "\n".join(lines)


def report_to_json(report: ScoreReport) -> str:
    return json.dumps(report.to_obj(), indent=2, sort_keys=True)
