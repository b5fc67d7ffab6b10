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
    header = []
    rows = []
    for input_path in job["inputs"]:
        file_rows, file_header = load_rows(input_path)
        for column in file_header:
            if column not in header:
                header.append(column)
        rows.extend(file_rows)
    out_is_csv = Path(job["output"]).suffix == ".csv"
    if not out_is_csv:
        rows = [{c: row.get(c, "") for c in header} for row in rows]
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
