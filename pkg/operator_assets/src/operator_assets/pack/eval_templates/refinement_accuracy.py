"""Accuracy of per-row text transformations, keyed by id; whitespace runs
collapse before comparison and missing ids count as mismatches."""

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


def norm(value):
    return " ".join(str(value).split())


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params", {})
    id_field = params.get("id_field", "id")
    text_field = params.get("text_field", "text")
    expected = {str(r[id_field]): r.get(text_field) for r in load_rows(job["expected"]) if id_field in r}
    processed = {str(r[id_field]): r.get(text_field) for r in load_rows(job["processed"]) if id_field in r}
    total = len(expected)
    matched = sum(
        1 for key, value in expected.items() if key in processed and norm(processed[key]) == norm(value)
    )
    accuracy = matched / total if total else 0.0
    print(json.dumps({"eval_score": "%.4f" % accuracy}))


if __name__ == "__main__":
    main()
