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

def cast_value(value, type_name):
    text = str(value).strip()
    try:
        if type_name == "integer":
            return int(float(text))
        if type_name == "real":
            return float(text)
        if type_name == "boolean":
            if text.lower() in ("true", "1", "yes"):
                return True
            if text.lower() in ("false", "0", "no"):
                return False
            return value
    except ValueError:
        return value
    return text


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    types = params.get("types") or {}
    rows, header = load_rows(job["inputs"][0])
    out_is_csv = Path(job["output"]).suffix == ".csv"

    for row in rows:
        for column, type_name in types.items():
            value = row.get(column)
            if is_null(value):
                continue
            cast = cast_value(value, type_name)
            row[column] = str(cast) if out_is_csv else cast
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
