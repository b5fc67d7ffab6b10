"""Shared loading helpers for the evaluation-script templates; each
template inlines what it needs so it stays standalone, this module is the
reference copy."""

import csv
import json
from pathlib import Path


def load_rows(path):
    path = Path(path)
    if path.suffix == ".csv":
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
            return rows, list(reader.fieldnames or [])
    rows, header = [], []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                row = json.loads(line)
                rows.append(row)
                for key in row:
                    if key not in header:
                        header.append(key)
    return rows, header


def emit(score):
    print(json.dumps({"eval_score": "%.4f" % max(0.0, min(1.0, score))}))
