#!/usr/bin/env python3
"""Regenerate the bundled operator-library snippets that share the common
job.json I/O preamble (the blocklist card is written by hand and serves as
the preamble's source of truth)."""

from __future__ import annotations

import json
from pathlib import Path

LIBRARY = Path(__file__).resolve().parents[1] / "src" / "govdag" / "bundled" / "library"

PREAMBLE = '''import csv
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
            writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({c: ("" if row.get(c) is None else row.get(c, "")) for c in header})
    else:
        with path.open("w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\\n")


def is_null(value):
    return value is None or value == ""

'''

CARDS: dict[str, dict] = {
    "filter-symbol-heavy-text": {
        "card": {
            "name": "Filter Symbol-Heavy Text",
            "description": "Filter out rows whose text column has a high proportion of symbol characters (punctuation noise, garbled runs); rows at or below the ratio threshold survive unchanged.",
            "tags": ["filter", "symbols", "ratio", "noise", "text", "garbled", "proportion", "rows"],
            "params": {"column": "string", "max_symbol_ratio": "real"},
            "category": "filtering",
        },
        "main": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    column = params.get("column", "text")
    max_ratio = float(params.get("max_symbol_ratio", 0.3))

    rows, header = load_rows(job["inputs"][0])
    kept = []
    for row in rows:
        text = str(row.get(column) or "")
        if text:
            symbols = sum(1 for ch in text if not ch.isalnum() and not ch.isspace())
            if symbols / len(text) > max_ratio:
                continue
        kept.append(row)
    save_rows(job["output"], kept, header)


if __name__ == "__main__":
    main()
''',
    },
    "normalize-format": {
        "card": {
            "name": "Normalize Format",
            "description": "Rewrite column values into a canonical format: dates are standardized to ISO YYYY-MM-DD (from MM/DD/YYYY, YYYY.MM.DD, YYYY/MM/DD or 'Month D, YYYY'), other values get whitespace collapsed and trimmed. The usual repair when a downstream step needs a value format guarantee.",
            "tags": ["normalize", "format", "date", "standardize", "iso", "canonical", "repair", "value"],
            "params": {"columns": "list of strings"},
            "category": "refinement",
        },
        "extra_imports": "import re\n",
        "main": '''
MONTHS = {
    "january": 1, "february": 2, "march": 3, "april": 4, "may": 5, "june": 6,
    "july": 7, "august": 8, "september": 9, "october": 10, "november": 11, "december": 12,
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "jun": 6, "jul": 7, "aug": 8,
    "sep": 9, "oct": 10, "nov": 11, "dec": 12,
}


def to_iso_date(text):
    text = text.strip()
    match = re.fullmatch(r"(\\d{4})-(\\d{2})-(\\d{2})", text)
    if match:
        return text
    match = re.fullmatch(r"(\\d{1,2})/(\\d{1,2})/(\\d{4})", text)
    if match:
        return "%04d-%02d-%02d" % (int(match.group(3)), int(match.group(1)), int(match.group(2)))
    match = re.fullmatch(r"(\\d{4})[./](\\d{1,2})[./](\\d{1,2})", text)
    if match:
        return "%04d-%02d-%02d" % (int(match.group(1)), int(match.group(2)), int(match.group(3)))
    match = re.fullmatch(r"([A-Za-z]+)\\.? (\\d{1,2}),? (\\d{4})", text)
    if match and match.group(1).lower() in MONTHS:
        return "%04d-%02d-%02d" % (int(match.group(3)), MONTHS[match.group(1).lower()], int(match.group(2)))
    return None


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    rows, header = load_rows(job["inputs"][0])
    columns = params.get("columns") or params.get("column") or []
    if isinstance(columns, str):
        columns = [columns]

    for row in rows:
        for column in columns:
            value = row.get(column)
            if is_null(value):
                continue
            iso = to_iso_date(str(value))
            row[column] = iso if iso is not None else " ".join(str(value).split())
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
''',
    },
    "cast-column-type": {
        "card": {
            "name": "Cast Column Type",
            "description": "Cast column values to a declared coarse type (integer, real, boolean, string); unparseable entries are left unchanged rather than dropped. The usual repair when a downstream step needs a type guarantee.",
            "tags": ["cast", "type", "convert", "integer", "real", "boolean", "repair", "column"],
            "params": {"types": "map of column to type name"},
            "category": "refinement",
        },
        "main": '''
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
''',
    },
    "impute-missing-values": {
        "card": {
            "name": "Impute Missing Values",
            "description": "Fill missing or null cells: numeric columns get the column mean of the present values, other columns get the most common value. Originally present cells are never modified. The usual repair when a downstream step requires no nulls.",
            "tags": ["impute", "missing", "null", "fill", "mean", "mode", "repair", "values"],
            "params": {"columns": "list of strings"},
            "category": "imputation",
        },
        "extra_imports": "from collections import Counter\n",
        "main": '''
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
''',
    },
    "interpolate-missing-numeric": {
        "card": {
            "name": "Interpolate Missing Numeric",
            "description": "Fill gaps in numeric columns by linear interpolation over row order; leading and trailing gaps take the nearest present value. Present cells are never modified.",
            "tags": ["interpolate", "missing", "numeric", "linear", "series", "gaps", "fill"],
            "params": {"columns": "list of strings"},
            "category": "imputation",
        },
        "main": '''
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
''',
    },
    "deduplicate-rows": {
        "card": {
            "name": "Deduplicate Rows",
            "description": "Remove duplicate records so the key column becomes unique, keeping the first occurrence of each key in input order. The usual repair when a downstream step requires a unique key.",
            "tags": ["deduplicate", "duplicates", "unique", "key", "remove", "first", "repair", "rows"],
            "params": {"key": "string"},
            "category": "dedup_consistency",
        },
        "main": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    key = params.get("key") or (params.get("columns") or ["id"])[0]
    rows, header = load_rows(job["inputs"][0])

    seen = set()
    kept = []
    for row in rows:
        marker = str(row.get(key))
        if marker in seen:
            continue
        seen.add(marker)
        kept.append(row)
    save_rows(job["output"], kept, header)


if __name__ == "__main__":
    main()
''',
    },
    "merge-incremental-updates": {
        "card": {
            "name": "Merge Incremental Updates",
            "description": "Incremental deduplication of a baseline file plus an increment file sharing a primary key: new keys are appended, identical records are ignored, and for the same key with different business fields the record with the latest update timestamp wins.",
            "tags": ["merge", "incremental", "baseline", "increment", "deduplication", "updated", "latest", "key"],
            "params": {"key": "string", "timestamp": "string"},
            "category": "dedup_consistency",
        },
        "main": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    key = params.get("key", "id")
    timestamp = params.get("timestamp", "updated_at")

    baseline, header = load_rows(job["inputs"][0])
    increment, inc_header = load_rows(job["inputs"][1])
    for column in inc_header:
        if column not in header:
            header.append(column)

    merged = {}
    order = []
    for row in baseline:
        marker = str(row.get(key))
        if marker not in merged:
            merged[marker] = row
            order.append(marker)
    for row in increment:
        marker = str(row.get(key))
        if marker not in merged:
            merged[marker] = row
            order.append(marker)
            continue
        current = merged[marker]
        if dict(current) == dict(row):
            continue
        if str(row.get(timestamp, "")) > str(current.get(timestamp, "")):
            merged[marker] = row
    save_rows(job["output"], [merged[m] for m in order], header)


if __name__ == "__main__":
    main()
''',
    },
    "join-tables-on-key": {
        "card": {
            "name": "Join Tables On Key",
            "description": "Inner-join two tables on a composite key shared by both; non-key columns present on both sides are disambiguated with _left and _right suffixes, left columns keep their order and right-only columns follow.",
            "tags": ["join", "tables", "composite", "key", "merge", "suffix", "conflict", "integration"],
            "params": {"keys": "list of strings"},
            "category": "integration",
        },
        "main": '''
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
''',
    },
    "concatenate-tables": {
        "card": {
            "name": "Concatenate Tables",
            "description": "Stack several tables into one: the output header is the union of all input columns (first-seen order) and rows follow input-file order, with absent cells left empty.",
            "tags": ["concatenate", "stack", "union", "tables", "combine", "append", "sources", "integration"],
            "params": {},
            "category": "integration",
        },
        "main": '''
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
''',
    },
    "label-sentiment-by-lexicon": {
        "card": {
            "name": "Label Sentiment By Lexicon",
            "description": "Assign a sentiment label (Positive / Neutral / Negative) to each record's content by counting lexicon hits; a deterministic rule-based stand-in for model-served sentiment labeling.",
            "tags": ["label", "sentiment", "classification", "positive", "negative", "neutral", "lexicon", "text"],
            "params": {"id_field": "string", "content_field": "string", "label_field": "string"},
            "category": "classification",
        },
        "extra_imports": "import re\n",
        "main": '''
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
        total += len(re.findall(r"(?<!\\w)" + re.escape(phrase) + r"(?!\\w)", text))
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
''',
    },
    "label-by-keyword-rules": {
        "card": {
            "name": "Label By Keyword Rules",
            "description": "Assign a topic label to each record by keyword rules over a text column: labels are tried in alphabetical order and the first whose keyword list matches wins; records with no hit get the fallback label.",
            "tags": ["label", "keyword", "rules", "topic", "classification", "categorize", "text", "records"],
            "params": {"column": "string", "label_field": "string", "rules": "map of label to keyword list"},
            "category": "classification",
        },
        "extra_imports": "import re\n",
        "main": '''
DEFAULT_RULES = {
    "food": ["restaurant", "coffee", "meal", "recipe", "pizza", "latte", "menu"],
    "sports": ["soccer", "match", "tournament", "gym", "football", "athlete", "race"],
    "tech": ["software", "laptop", "phone", "app", "algorithm", "computer", "device"],
}


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    column = params.get("column", "text")
    label_field = params.get("label_field", "label")
    rules = params.get("rules") or DEFAULT_RULES
    fallback = params.get("fallback", "other")

    rows, header = load_rows(job["inputs"][0])
    if label_field not in header:
        header.append(label_field)
    for row in rows:
        text = str(row.get(column) or "").lower()
        label = fallback
        for candidate in sorted(rules):
            if any(re.search(r"\\b" + re.escape(word) + r"\\b", text) for word in rules[candidate]):
                label = candidate
                break
        row[label_field] = label
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
''',
    },
}


def main() -> None:
    for slug, spec in CARDS.items():
        card_dir = LIBRARY / slug
        card_dir.mkdir(parents=True, exist_ok=True)
        (card_dir / "card.json").write_text(
            json.dumps(spec["card"], indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        source = PREAMBLE
        extra = spec.get("extra_imports")
        if extra:
            source = source.replace("import csv\nimport json\n", "import csv\nimport json\n" + extra)
        source += spec["main"].lstrip("\n")
        (card_dir / "snippet.py").write_text(source, encoding="utf-8")
        print(f"wrote {card_dir.relative_to(LIBRARY.parents[3])}")


if __name__ == "__main__":
    main()
