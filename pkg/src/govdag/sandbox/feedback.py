"""Structured feedback for the debug loop: the offending code region, the
full error evidence or the violated contract assertions, targeted revision
advice per contract, and the broader task context, in that fixed order."""

from __future__ import annotations

from dataclasses import dataclass

from govdag.core.types import Predicate, PredicateKind
from govdag.sandbox.prompts import load_template
from govdag.sandbox.runner import ExecutionOutcome


@dataclass(frozen=True)
class Diagnostic:
    outcome: ExecutionOutcome
    violated_contracts: tuple[Predicate, ...]
    revision_advice: str
    task_context: str
    source: str = ""
    abstract_op: str = ""


def advice_for(pred: Predicate) -> str:
    if pred.kind is PredicateKind.NO_NULLS:
        return (
            f"Add a check to handle potential null values in column '{pred.column}' "
            "before writing the output."
        )
    if pred.kind is PredicateKind.TYPE_IS:
        return f"Cast values in column '{pred.column}' to {pred.type_name} and guard unparseable entries."
    if pred.kind is PredicateKind.VALUE_FORMAT:
        return f"Normalize every value in column '{pred.column}' to match /{pred.format}/."
    if pred.kind is PredicateKind.UNIQUE_KEY:
        return f"Drop duplicate rows so that column '{pred.column}' is a unique key."
    if pred.kind is PredicateKind.COLUMN_EXISTS:
        return f"Make sure the output still contains the column '{pred.column}'."
    if pred.kind is PredicateKind.ROW_COUNT_MIN:
        return f"The output must keep at least {pred.min_rows} rows."
    return f"Write the output as {pred.format}."


def make_diagnostic(
    outcome: ExecutionOutcome,
    violated: list[Predicate],
    task_context: str,
    source: str,
    abstract_op: str = "",
) -> Diagnostic:
    advice_lines = [f"- {advice_for(p)}" for p in violated]
    if not advice_lines:
        advice_lines = ["- Fix the runtime failure shown above; the contract itself was not the problem."]
    return Diagnostic(
        outcome=outcome,
        violated_contracts=tuple(violated),
        revision_advice="\n".join(advice_lines),
        task_context=task_context,
        source=source,
        abstract_op=abstract_op,
    )


def _render_span(diag: Diagnostic) -> str:
    lines = diag.source.splitlines()
    span = diag.outcome.offending_span
    if span is None or not lines:
        numbered = [f"{i:4d} | {line}" for i, line in enumerate(lines, start=1)]
        return "(no single offending line identified; full script follows)\n" + "\n".join(numbered)
    start, end = span
    low = max(1, start - 2)
    high = min(len(lines), end + 2)
    numbered = []
    for i in range(low, high + 1):
        marker = ">>" if start <= i <= end else "  "
        numbered.append(f"{marker} {i:4d} | {lines[i - 1]}")
    return "\n".join(numbered)


def _render_failure(diag: Diagnostic) -> str:
    outcome = diag.outcome
    if outcome.ok:
        lines = ["The script ran without errors but the output violates its governance contract:"]
        lines.extend(f"- assert {p.describe()}  [VIOLATED]" for p in diag.violated_contracts)
        return "\n".join(lines)
    parts = [f"Execution failed with status={outcome.status}, exit code {outcome.exit_code}."]
    if outcome.stderr.strip():
        parts.append("Error output:\n" + outcome.stderr.rstrip())
    if outcome.stderr_truncated or outcome.stdout_truncated:
        parts.append("(captured output was truncated at the sandbox limit)")
    if outcome.stack_trace:
        parts.append("Stack trace:\n" + outcome.stack_trace)
    return "\n\n".join(parts)


def build_feedback(diag: Diagnostic) -> str:
    template = load_template("feedback")
    return template.substitute(
        abstract_op=diag.abstract_op or "(unnamed)",
        code_span=_render_span(diag),
        failure_section=_render_failure(diag),
        advice=diag.revision_advice,
        task_context=diag.task_context,
    )
