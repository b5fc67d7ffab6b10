"""Dedup F1: a prediction is a true positive iff its id is novel in the
stream, exists in the reference, and all fields match."""

import csv
import json
from pathlib import Path


def load_rows(path):
    path = Path(path)
    if path.suffix == ".csv":
        with path.open(newline="", encoding="utf-8") as fh:
            return list(csv.DictReader(fh))
    with path.open(encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    id_field = job.get("params", {}).get("id_field", "id")
    gt_map = {str(r.get(id_field, "")): r for r in load_rows(job["expected"])}
    predictions = load_rows(job["processed"])
    tp_ids, fp = set(), 0
    for row in predictions:
        rid = str(row.get(id_field, ""))
        if not rid or rid in tp_ids or gt_map.get(rid) != row:
            fp += 1
            continue
        tp_ids.add(rid)
    tp = len(tp_ids)
    fn = len(gt_map) - tp
    precision = tp / (tp + fp) if tp or fp else 0.0
    recall = tp / (tp + fn) if tp or fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    print(json.dumps({"eval_score": "%.4f" % (f1 if predictions else 0.0)}))


if __name__ == "__main__":
    main()
