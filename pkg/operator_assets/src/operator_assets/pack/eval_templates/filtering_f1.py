"""F1 over kept row ids: expected vs processed."""

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
    expected = {str(r[id_field]) for r in load_rows(job["expected"]) if id_field in r}
    processed = {str(r[id_field]) for r in load_rows(job["processed"]) if id_field in r}
    tp = len(expected & processed)
    precision = tp / len(processed) if processed else 0.0
    recall = tp / len(expected) if expected else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    print(json.dumps({"eval_score": "%.4f" % f1}))


if __name__ == "__main__":
    main()
