"""Native per-category evaluators.

Each evaluator compares a processed output against ground truth and emits
a normalized score in [0, 1]. On (gt, gt) input every evaluator scores
1.0, which is what the benchmark's consistency gate relies on.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

Row = Mapping[str, Any]
Table = tuple[Sequence[str], Sequence[Row]]  # (header, rows)


@dataclass(frozen=True)
class EvalOutcome:
    score: float
    reason: str | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def eval_filtering(expected: Sequence[Row], processed: Sequence[Row], id_field: str = "id") -> EvalOutcome:
    """F1 over the sets of row ids kept by the filter."""
    expected_ids = {str(row[id_field]) for row in expected if id_field in row}
    processed_ids = {str(row[id_field]) for row in processed if id_field in row}
    tp = len(expected_ids & processed_ids)
    precision = tp / len(processed_ids) if processed_ids else 0.0
    recall = tp / len(expected_ids) if expected_ids else 0.0
    return EvalOutcome(_f1(precision, recall))


def _normalize_text(value: Any) -> str:
    # Collapse internal whitespace runs and strip the ends.
    return " ".join(str(value).split())


def eval_refinement(
    expected: Sequence[Row],
    processed: Sequence[Row],
    id_field: str = "id",
    text_field: str = "text",
) -> EvalOutcome:
    """Accuracy of per-row text transformations, keyed by id."""
    expected_map = {str(r[id_field]): r.get(text_field) for r in expected if id_field in r}
    processed_map = {str(r[id_field]): r.get(text_field) for r in processed if id_field in r}
    total = len(expected_map)
    if total == 0:
        return EvalOutcome(0.0, "empty ground truth")
    matched = 0
    for row_id, exp_text in expected_map.items():
        if row_id not in processed_map:
            continue
        if _normalize_text(processed_map[row_id]) == _normalize_text(exp_text):
            matched += 1
    return EvalOutcome(matched / total)


def _is_null(value: Any) -> bool:
    return value is None or (isinstance(value, str) and value == "")


def _values_equal(a: Any, b: Any, atol: float = 0.0) -> bool:
    try:
        return abs(float(a) - float(b)) <= atol
    except (TypeError, ValueError):
        return str(a) == str(b)


def eval_imputation(candidate: Table, gt: Table, raw: Table, atol: float = 1e-6) -> EvalOutcome:
    """All-or-nothing imputation check.

    1.0 iff shape and column order match the reference, every cell missing
    in the raw table is filled and within ``atol`` of the reference, and
    every originally present cell is unchanged.
    """
    cand_header, cand_rows = candidate
    gt_header, gt_rows = gt
    raw_header, raw_rows = raw

    if len(cand_rows) != len(gt_rows) or len(cand_header) != len(gt_header):
        return EvalOutcome(
            0.0,
            f"dimension mismatch: expected ({len(gt_rows)}, {len(gt_header)}), "
            f"got ({len(cand_rows)}, {len(cand_header)})",
        )
    if list(cand_header) != list(gt_header):
        return EvalOutcome(0.0, "column names or order do not match the reference")
    if len(raw_rows) != len(gt_rows):
        return EvalOutcome(0.0, "raw/reference row count mismatch")

    for idx, (cand_row, gt_row, raw_row) in enumerate(zip(cand_rows, gt_rows, raw_rows)):
        for column in gt_header:
            raw_missing = _is_null(raw_row.get(column))
            cand_value = cand_row.get(column)
            if raw_missing:
                if _is_null(cand_value):
                    return EvalOutcome(0.0, f"missing value not filled at row {idx}, column '{column}'")
                if not _values_equal(cand_value, gt_row.get(column), atol):
                    return EvalOutcome(
                        0.0, f"filled value does not match the reference at row {idx}, column '{column}'"
                    )
            else:
                if not _values_equal(cand_value, raw_row.get(column)):
                    return EvalOutcome(
                        0.0, f"originally complete data modified at row {idx}, column '{column}'"
                    )
    return EvalOutcome(1.0)


def eval_dedup(gt_rows: Sequence[Row], predicted: Sequence[Row], id_field: str = "id") -> EvalOutcome:
    """F1 where a prediction is a true positive iff its id is novel in the
    prediction stream, exists in the ground truth, and all fields match.

    Duplicates, unknown ids and field mismatches count as false positives;
    ground-truth rows never matched count as false negatives.
    """
    gt_map = {str(row.get(id_field, "")): row for row in gt_rows}
    if not predicted:
        return EvalOutcome(0.0, "no predicted rows")

    tp_ids: set[str] = set()
    fp = 0
    for row in predicted:
        rid = str(row.get(id_field, ""))
        if not rid:
            fp += 1
            continue
        if rid in tp_ids:
            fp += 1  # duplicate of an already-matched row
            continue
        gt_row = gt_map.get(rid)
        if gt_row is None:
            fp += 1
            continue
        if dict(row) == dict(gt_row):
            tp_ids.add(rid)
        else:
            fp += 1
    fn = len(gt_map) - len(tp_ids)
    tp = len(tp_ids)
    precision = tp / (tp + fp) if tp or fp else 0.0
    recall = tp / (tp + fn) if tp or fn else 0.0
    return EvalOutcome(_f1(precision, recall))


def _project(rows: Sequence[Row], header: Sequence[str]) -> Counter:
    return Counter(tuple("" if _is_null(row.get(c)) else str(row.get(c)) for c in header) for row in rows)


def eval_integration(gt_header: Sequence[str], gt_rows: Sequence[Row], predicted: Sequence[Row]) -> EvalOutcome:
    """1.0 iff the prediction has every ground-truth column and the row
    multisets agree when projected onto the ground-truth header."""
    if not predicted:
        return EvalOutcome(0.0, "output is empty")
    missing = [c for c in gt_header if c not in predicted[0]]
    if missing:
        return EvalOutcome(0.0, f"missing columns: {missing}")
    gt_counter = _project(gt_rows, gt_header)
    pred_counter = _project(predicted, gt_header)
    if gt_counter != pred_counter:
        lack = list((gt_counter - pred_counter).elements())[:3]
        extra = list((pred_counter - gt_counter).elements())[:3]
        parts = []
        if lack:
            parts.append(f"missing row examples: {lack}")
        if extra:
            parts.append(f"extra row examples: {extra}")
        return EvalOutcome(0.0, "; ".join(parts))
    return EvalOutcome(1.0)


def eval_classification(
    gt_records: Sequence[Row],
    predicted: Sequence[Row],
    id_field: str = "id",
    label_field: str = "label",
) -> EvalOutcome:
    """Label accuracy; values are end-trimmed and compared case-sensitively."""
    norm = lambda s: str(s).strip()  # noqa: E731 - only trim; case-sensitive
    gt_map = {norm(r[id_field]): norm(r.get(label_field, "")) for r in gt_records if id_field in r}
    pred_map = {norm(r[id_field]): norm(r.get(label_field, "")) for r in predicted if id_field in r}
    total = len(gt_map)
    if total == 0:
        return EvalOutcome(0.0, "empty ground truth")
    correct = sum(1 for key, value in gt_map.items() if pred_map.get(key) == value)
    return EvalOutcome(correct / total)
