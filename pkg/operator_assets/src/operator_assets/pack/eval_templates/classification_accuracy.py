"""Label accuracy keyed by id; values are end-trimmed, case-sensitive, and
missing predictions count as wrong."""

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
    params = job.get("params", {})
    id_field = params.get("id_field", "id")
    label_field = params.get("label_field", "label")
    norm = lambda s: str(s).strip()  # only trim; case-sensitive
    gt_map = {norm(r[id_field]): norm(r.get(label_field, "")) for r in load_rows(job["expected"]) if id_field in r}
    pred_map = {norm(r[id_field]): norm(r.get(label_field, "")) for r in load_rows(job["processed"]) if id_field in r}
    total = len(gt_map)
    correct = sum(1 for key, value in gt_map.items() if pred_map.get(key) == value)
    print(json.dumps({"eval_score": "%.4f" % (correct / total if total else 0.0)}))


if __name__ == "__main__":
    main()
