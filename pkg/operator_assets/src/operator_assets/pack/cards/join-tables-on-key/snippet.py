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

def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    keys = params.get("keys") or ["id"]
    if isinstance(keys, str):
        keys = [keys]

    left_rows, left_header = load_rows(job["inputs"][0])
    right_rows, right_header = load_rows(job["inputs"][1])
    conflicts = [c for c in left_header if c in right_header and c not in keys]

    header = []
    for column in left_header:
        header.append(column + "_left" if column in conflicts else column)
    for column in right_header:
        if column in keys:
            continue
        header.append(column + "_right" if column in conflicts else column)

    by_key = {}
    for row in right_rows:
        by_key.setdefault(tuple(str(row.get(k)) for k in keys), []).append(row)

    joined = []
    for left in left_rows:
        for right in by_key.get(tuple(str(left.get(k)) for k in keys), []):
            row = {}
            for column in left_header:
                name = column + "_left" if column in conflicts else column
                row[name] = left.get(column)
            for column in right_header:
                if column in keys:
                    continue
                name = column + "_right" if column in conflicts else column
                row[name] = right.get(column)
            joined.append(row)
    save_rows(job["output"], joined, header)


if __name__ == "__main__":
    main()
