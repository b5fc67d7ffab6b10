import csv
import json
from collections import Counter
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

def column_mean(values):
    numbers = []
    for value in values:
        try:
            numbers.append(float(value))
        except (TypeError, ValueError):
            return None
    if not numbers:
        return None
    return sum(numbers) / len(numbers)


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    rows, header = load_rows(job["inputs"][0])
    columns = params.get("columns") or [
        c for c in header if any(is_null(row.get(c)) for row in rows)
    ]
    if isinstance(columns, str):
        columns = [columns]
    out_is_csv = Path(job["output"]).suffix == ".csv"

    for column in columns:
        present = [row.get(column) for row in rows if not is_null(row.get(column))]
        mean = column_mean(present)
        if mean is not None:
            fill = str(mean) if out_is_csv else mean
        else:
            counts = Counter(str(v) for v in present)
            ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            fill = ranked[0][0] if ranked else ""
        for row in rows:
            if is_null(row.get(column)):
                row[column] = fill
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
