"""All-or-nothing imputation check: shape and columns match the reference,
raw-missing cells are filled within ATOL, present cells stay unchanged."""

import csv
import json
from pathlib import Path

ATOL = 1e-6


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


def null(value):
    return value is None or value == ""


def close(a, b, atol):
    try:
        return abs(float(a) - float(b)) <= atol
    except (TypeError, ValueError):
        return str(a) == str(b)


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    cand_rows, cand_header = load_table(job["processed"])
    gt_rows, gt_header = load_table(job["expected"])
    raw_rows, _ = load_table(job["raw"])
    score = 1.0
    if (len(cand_rows), list(cand_header)) != (len(gt_rows), list(gt_header)) or len(raw_rows) != len(gt_rows):
        score = 0.0
    else:
        for cand, gt, raw in zip(cand_rows, gt_rows, raw_rows):
            for column in gt_header:
                if null(raw.get(column)):
                    if null(cand.get(column)) or not close(cand.get(column), gt.get(column), ATOL):
                        score = 0.0
                elif not close(cand.get(column), raw.get(column), 0.0):
                    score = 0.0
    print(json.dumps({"eval_score": "%.4f" % score}))


if __name__ == "__main__":
    main()
