import csv
import json
import re
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


def save_rows(path, rows, header):
    path = Path(path)
    if path.suffix == ".csv":
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({c: ("" if row.get(c) is None else row.get(c, "")) for c in header})
    else:
        with path.open("w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def is_null(value):
    return value is None or value == ""

POSITIVE = (
    "delicious", "great", "nice", "satisfied", "moving", "recommend", "fast",
    "solved", "love", "happy", "wonderful", "excellent", "on time",
)
NEGATIVE = (
    "terrible", "disappointing", "broke", "annoying", "delayed", "never come",
    "awful", "slow", "angry", "bad", "worst", "hasn't updated",
)


def hits(text, phrases):
    total = 0
    for phrase in phrases:
        total += len(re.findall(r"(?<!\w)" + re.escape(phrase) + r"(?!\w)", text))
    return total


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    content_field = params.get("content_field", "content")
    label_field = params.get("label_field", "sentiment")

    rows, header = load_rows(job["inputs"][0])
    if label_field not in header:
        header.append(label_field)
    for row in rows:
        text = str(row.get(content_field) or "").lower()
        positive = hits(text, POSITIVE)
        negative = hits(text, NEGATIVE)
        if positive > negative:
            row[label_field] = "Positive"
        elif negative > positive:
            row[label_field] = "Negative"
        else:
            row[label_field] = "Neutral"
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
