"""Post-condition verification: contracts turn acceptance criteria into
assertions over the produced output, so an operator cannot fail silently."""

from __future__ import annotations

import re
from pathlib import Path
from typing import Any, Sequence

from govdag.core.tabular import detect_format, is_null, read_rows, sniff_coarse_type
from govdag.core.types import OperatorNode, Predicate, PredicateKind
from govdag.errors import DataFileError
from govdag.sandbox.runner import ExecutionOutcome


def _column_values(rows: Sequence[dict[str, Any]], column: str) -> list[Any]:
    return [row.get(column) for row in rows]


def _holds(pred: Predicate, path: Path, header: Sequence[str], rows: Sequence[dict[str, Any]]) -> bool:
    if pred.kind is PredicateKind.FILE_FORMAT:
        try:
            return detect_format(path) == pred.format
        except DataFileError:
            return False
    if pred.kind is PredicateKind.ROW_COUNT_MIN:
        assert pred.min_rows is not None
        return len(rows) >= pred.min_rows
    assert pred.column is not None
    if pred.kind is PredicateKind.COLUMN_EXISTS:
        return pred.column in header
    if pred.column not in header:
        return False
    values = _column_values(rows, pred.column)
    if pred.kind is PredicateKind.NO_NULLS:
        return not any(is_null(v) for v in values)
    if pred.kind is PredicateKind.UNIQUE_KEY:
        seen = [str(v) for v in values]
        return len(set(seen)) == len(seen)
    if pred.kind is PredicateKind.VALUE_FORMAT:
        assert pred.format is not None
        pattern = re.compile(pred.format)
        return all(pattern.fullmatch(str(v)) for v in values if not is_null(v))
    if pred.kind is PredicateKind.TYPE_IS:
        if pred.type_name == "string":
            return True  # anything reads back as a string
        for value in values:
            if is_null(value):
                continue
            sniffed = sniff_coarse_type(value)
            if sniffed == pred.type_name:
                continue
            if pred.type_name == "real" and sniffed == "integer":
                continue
            return False
        return True
    raise AssertionError(f"unhandled predicate kind {pred.kind}")


def check_post(outcome: ExecutionOutcome, node: OperatorNode, output_files: Sequence[Path]) -> list[Predicate]:
    """Evaluate the node's post predicates against the primary output file;
    returns the violated ones. Must only be called on an ok outcome."""
    if not outcome.ok:
        raise ValueError("check_post requires an ok execution outcome")
    post = node.contract.post
    if not post:
        return []
    if not output_files:
        return list(post)
    path = Path(output_files[0])
    if not path.is_file():
        return list(post)  # claimed success without producing the output
    try:
        header, rows = read_rows(path)
    except DataFileError:
        return list(post)
    return [pred for pred in post if not _holds(pred, path, header, rows)]
