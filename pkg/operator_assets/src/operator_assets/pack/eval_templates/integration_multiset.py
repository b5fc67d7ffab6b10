"""Integration check: predicted rows carry every reference column and the
row multisets agree when projected onto the reference header."""

import csv
import json
from collections import Counter
from pathlib import Path


def load_table(path):
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


def project(rows, header):
    return Counter(
        tuple("" if row.get(c) is None else str(row.get(c, "")) for c in header) for row in rows
    )


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    gt_rows, gt_header = load_table(job["expected"])
    pred_rows, _ = load_table(job["processed"])
    score = 1.0
    if not pred_rows or any(c not in pred_rows[0] for c in gt_header):
        score = 0.0
    elif project(gt_rows, gt_header) != project(pred_rows, gt_header):
        score = 0.0
    print(json.dumps({"eval_score": "%.4f" % score}))


if __name__ == "__main__":
    main()
