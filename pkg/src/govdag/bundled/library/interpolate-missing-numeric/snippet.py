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

def interpolate(values):
    known = [(i, float(v)) for i, v in enumerate(values) if not is_null(v)]
    if not known:
        return values
    result = list(values)
    for i, value in enumerate(values):
        if not is_null(value):
            continue
        before = [(j, x) for j, x in known if j < i]
        after = [(j, x) for j, x in known if j > i]
        if before and after:
            (j0, x0), (j1, x1) = before[-1], after[0]
            result[i] = x0 + (x1 - x0) * (i - j0) / (j1 - j0)
        elif before:
            result[i] = before[-1][1]
        else:
            result[i] = after[0][1]
    return result


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    rows, header = load_rows(job["inputs"][0])
    columns = params.get("columns") or []
    if isinstance(columns, str):
        columns = [columns]
    out_is_csv = Path(job["output"]).suffix == ".csv"

    for column in columns:
        filled = interpolate([row.get(column) for row in rows])
        for row, value in zip(rows, filled):
            if is_null(row.get(column)):
                row[column] = str(value) if out_is_csv else value
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
