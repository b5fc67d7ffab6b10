"""A rule-based reply engine for offline runs.

It recognizes the framework's own prompt families (grounding, contract
extraction, codegen, feedback, objective reversal, noise code, evaluation
scripts) and answers them deterministically: planning replies come from a
keyword rule table, code replies come from the bundled operator library.

Two operators deliberately return a broken first draft and only hand out
the correct script after a feedback prompt, so offline end-to-end runs
exercise both debug-loop paths (a runtime crash and a contract violation).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from govdag.bundled import seed_library_path
from govdag.gateway.base import Backend
from govdag.gateway.mock import MockBackend

_SCHEMA_RE = re.compile(r"(?P<fmt>\w+) \[(?P<cols>.*)\]")
_STEP_RE = re.compile(r"^Step \d+: ", re.MULTILINE)


def _parse_schema(line: str) -> tuple[str, list[tuple[str, str]]]:
    match = _SCHEMA_RE.search(line)
    if not match:
        return "jsonl", []
    columns = []
    for part in match.group("cols").split(", "):
        if ": " in part:
            name, coarse = part.split(": ", 1)
            columns.append((name, coarse))
    return match.group("fmt"), columns


def _section(prompt: str, label: str, end: str) -> str:
    start = prompt.find(label)
    if start < 0:
        return ""
    start += len(label)
    stop = prompt.find(end, start)
    return prompt[start:stop if stop >= 0 else len(prompt)].strip()


def _columns_in(text: str, columns: Sequence[str]) -> list[str]:
    lowered = text.lower()
    return [c for c in columns if re.search(r"(?<![a-z0-9_])" + re.escape(c.lower()) + r"(?![a-z0-9_])", lowered)]


def _pred(kind: str, **args: Any) -> dict[str, Any]:
    return {"kind": kind, **args}


@dataclass
class PlannedStep:
    op: str
    params: dict[str, Any]
    pre: list[dict[str, Any]] = field(default_factory=list)
    post: list[dict[str, Any]] = field(default_factory=list)
    noise_hint: str = "identity"


RuleFn = Callable[[str, list[str]], PlannedStep]


def _text_column(step: str, columns: list[str]) -> str:
    named = _columns_in(step, columns)
    for candidate in named:
        if candidate in ("text", "content", "description"):
            return candidate
    return named[0] if named else "text"


def _rule_blocklist(step: str, columns: list[str]) -> PlannedStep:
    column = _text_column(step, columns)
    match = re.search(r"blocked words \(([^)]*)\)", step, re.IGNORECASE)
    words = []
    if match:
        body = re.sub(r"^such as ", "", match.group(1).strip(), flags=re.IGNORECASE)
        words = [w.strip() for w in body.split(",") if w.strip()]
    if not words:
        words = ["damn", "crap", "bastard", "bitch", "asshole"]
    return PlannedStep(
        op="Filter Rows By Blocklist",
        params={"column": column, "blocklist": words},
        pre=[_pred("column_exists", column=column)],
        post=[_pred("column_exists", column=column), _pred("row_count_min", min_rows=1)],
        noise_hint="blocked-words",
    )


def _rule_symbols(step: str, columns: list[str]) -> PlannedStep:
    column = _text_column(step, columns)
    match = re.search(r"(\d+(?:\.\d+)?)\s*%", step)
    ratio = float(match.group(1)) / 100 if match else 0.3
    return PlannedStep(
        op="Filter Symbol-Heavy Text",
        params={"column": column, "max_symbol_ratio": ratio},
        pre=[_pred("column_exists", column=column)],
        post=[_pred("column_exists", column=column), _pred("row_count_min", min_rows=1)],
        noise_hint="symbol-noise",
    )


def _rule_html(step: str, columns: list[str]) -> PlannedStep:
    column = _text_column(step, columns)
    return PlannedStep(
        op="Strip HTML Tags",
        params={"column": column},
        pre=[_pred("column_exists", column=column)],
        post=[_pred("column_exists", column=column)],
        noise_hint="html-tags",
    )


def _rule_dates(step: str, columns: list[str]) -> PlannedStep:
    named = [c for c in _columns_in(step, columns) if "date" in c.lower()]
    column = named[0] if named else ("date" if "date" in columns else _text_column(step, columns))
    return PlannedStep(
        op="Standardize Date Format",
        params={"columns": [column]},
        pre=[_pred("column_exists", column=column)],
        post=[_pred("value_format", column=column, format=r"\d{4}-\d{2}-\d{2}")],
        noise_hint="date-formats",
    )


def _numeric_targets(step: str, columns: list[str]) -> list[str]:
    named = [c for c in _columns_in(step, columns) if c not in ("id", "text_id")]
    return named or [c for c in columns if c not in ("id", "text_id")]


def _rule_interpolate(step: str, columns: list[str]) -> PlannedStep:
    targets = _numeric_targets(step, columns)
    return PlannedStep(
        op="Interpolate Missing Numeric",
        params={"columns": targets},
        pre=[_pred("column_exists", column=c) for c in targets],
        post=[_pred("no_nulls", column=c) for c in targets],
        noise_hint="missing-cells",
    )


def _rule_impute(step: str, columns: list[str]) -> PlannedStep:
    targets = _numeric_targets(step, columns)
    return PlannedStep(
        op="Impute Missing Values",
        params={"columns": targets, "strategy": "mean"},
        pre=[_pred("column_exists", column=c) for c in targets],
        post=[_pred("no_nulls", column=c) for c in targets],
        noise_hint="missing-cells",
    )


def _rule_merge(step: str, columns: list[str]) -> PlannedStep:
    key = "id" if "id" in columns or not columns else columns[0]
    return PlannedStep(
        op="Merge Incremental Updates",
        params={"key": key, "timestamp": "updated_at"},
        pre=[_pred("column_exists", column=key)],
        post=[_pred("unique_key", column=key)],
        noise_hint="stale-records",
    )


def _rule_dedup(step: str, columns: list[str]) -> PlannedStep:
    key = "id" if "id" in columns or not columns else columns[0]
    return PlannedStep(
        op="Deduplicate Rows",
        params={"key": key},
        pre=[_pred("column_exists", column=key)],
        post=[_pred("unique_key", column=key)],
        noise_hint="duplicates",
    )


def _rule_join(step: str, columns: list[str]) -> PlannedStep:
    match = re.search(r"composite key \(([^)]*)\)", step, re.IGNORECASE)
    keys = [k.strip() for k in match.group(1).split(",")] if match else ["id"]
    return PlannedStep(
        op="Join Tables On Key",
        params={"keys": keys},
        pre=[_pred("column_exists", column=k) for k in keys if k in columns] or [],
        post=[_pred("row_count_min", min_rows=1)],
        noise_hint="unjoined-sources",
    )


def _rule_concat(step: str, columns: list[str]) -> PlannedStep:
    return PlannedStep(
        op="Concatenate Tables",
        params={},
        post=[_pred("row_count_min", min_rows=1)],
        noise_hint="partial-sources",
    )


def _rule_sentiment(step: str, columns: list[str]) -> PlannedStep:
    content = "content" if "content" in columns or not columns else _text_column(step, columns)
    return PlannedStep(
        op="Label Sentiment By Lexicon",
        params={"content_field": content, "label_field": "sentiment"},
        pre=[_pred("column_exists", column=content)],
        post=[_pred("column_exists", column="sentiment"), _pred("no_nulls", column="sentiment")],
        noise_hint="stripped-labels",
    )


def _rule_topic(step: str, columns: list[str]) -> PlannedStep:
    column = _text_column(step, columns)
    return PlannedStep(
        op="Label By Keyword Rules",
        params={"column": column, "label_field": "label"},
        pre=[_pred("column_exists", column=column)],
        post=[_pred("column_exists", column="label"), _pred("no_nulls", column="label")],
        noise_hint="stripped-labels",
    )


def _rule_identity(step: str, columns: list[str]) -> PlannedStep:
    return PlannedStep(op="Copy Data", params={}, noise_hint="identity")


# Order matters: earlier rules win.
RULES: tuple[tuple[re.Pattern, RuleFn], ...] = (
    (re.compile(r"blocked words|profanit|offensive", re.I), _rule_blocklist),
    (re.compile(r"symbol", re.I), _rule_symbols),
    (re.compile(r"html", re.I), _rule_html),
    (re.compile(r"\bdates?\b", re.I), _rule_dates),
    (re.compile(r"interpolat", re.I), _rule_interpolate),
    (re.compile(r"impute|missing|fill", re.I), _rule_impute),
    (re.compile(r"incremental|baseline", re.I), _rule_merge),
    (re.compile(r"duplicate|dedup", re.I), _rule_dedup),
    (re.compile(r"\bjoin\b", re.I), _rule_join),
    (re.compile(r"concatenat|stack|combine", re.I), _rule_concat),
    (re.compile(r"sentiment", re.I), _rule_sentiment),
    (re.compile(r"label|classif|categor|topic", re.I), _rule_topic),
    (re.compile(r"unchanged|as-is|identity", re.I), _rule_identity),
)


def match_step(step: str, columns: list[str]) -> PlannedStep:
    for pattern, rule in RULES:
        if pattern.search(step):
            return rule(step, columns)
    return _rule_identity(step, columns)


def split_steps(goal: str) -> list[str]:
    if "Step 1:" not in goal:
        return [goal]
    parts = _STEP_RE.split(goal)
    return [p.strip() for p in parts[1:] if p.strip()]


# --- code corpus ---------------------------------------------------------

_OP_TO_CARD = {
    "Filter Rows By Blocklist": "filter-rows-by-blocklist",
    "Filter Symbol-Heavy Text": "filter-symbol-heavy-text",
    "Standardize Date Format": "normalize-format",
    "Normalize Format": "normalize-format",
    "Cast Column Type": "cast-column-type",
    "Impute Missing Values": "impute-missing-values",
    "Interpolate Missing Numeric": "interpolate-missing-numeric",
    "Deduplicate Rows": "deduplicate-rows",
    "Merge Incremental Updates": "merge-incremental-updates",
    "Join Tables On Key": "join-tables-on-key",
    "Concatenate Tables": "concatenate-tables",
    "Label Sentiment By Lexicon": "label-sentiment-by-lexicon",
    "Label By Keyword Rules": "label-by-keyword-rules",
}

_STRIP_HTML_SNIPPET = '''import csv
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
            writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({c: ("" if row.get(c) is None else row.get(c, "")) for c in header})
    else:
        with path.open("w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\\n")


TAG_RE = re.compile(r"<[^>]+>")


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    column = params.get("column", "text")
    rows, header = load_rows(job["inputs"][0])
    for row in rows:
        value = row.get(column)
        if value is None or value == "":
            continue
        row[column] = " ".join(TAG_RE.sub(" ", str(value)).split())
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
'''

_COPY_SNIPPET = '''import json
import shutil
from pathlib import Path


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    shutil.copyfile(job["inputs"][0], job["output"])


if __name__ == "__main__":
    main()
'''

_EXTRA_SNIPPETS = {
    "Strip HTML Tags": _STRIP_HTML_SNIPPET,
    "Copy Data": _COPY_SNIPPET,
}

# First-draft bugs keyed by operator: a KeyError crash for the symbol
# filter (exercises the traceback path) and a fill-nothing imputation
# (exercises the contract-violation path).
_BUGGY_SNIPPETS = {
    "Filter Symbol-Heavy Text": '''import json
from pathlib import Path


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    params = job.get("params") or {}
    ratio_cap = params["symbol_cap"]
    raise SystemExit(ratio_cap)


if __name__ == "__main__":
    main()
''',
    "Impute Missing Values": _COPY_SNIPPET,
}


def _load_snippet(op: str) -> str | None:
    if op in _EXTRA_SNIPPETS:
        return _EXTRA_SNIPPETS[op]
    slug = _OP_TO_CARD.get(op)
    if slug is None:
        return None
    return (seed_library_path() / slug / "snippet.py").read_text(encoding="utf-8")


# --- noise corpus --------------------------------------------------------

_REVERSALS = {
    "blocked-words": (
        "Take the clean records and insert extra rows whose text contains blocked "
        "words (offensive or vulgar terms), so a filtering pass is needed again."
    ),
    "symbol-noise": (
        "Take the clean records and insert extra rows whose text is dominated by "
        "symbol characters and garbled punctuation runs."
    ),
    "html-tags": (
        "Wrap most text values in HTML markup (paragraph and anchor tags) so the "
        "prose needs to be cleaned of tags again."
    ),
    "date-formats": (
        "Rewrite most of the standardized dates into inconsistent regional formats "
        "such as MM/DD/YYYY so the column needs normalizing again."
    ),
    "missing-cells": (
        "Blank out a share of the numeric cells to reintroduce missing values that "
        "an imputation pass would have to fill."
    ),
    "duplicates": (
        "Append repeated copies of existing records so the key column is no longer "
        "unique and deduplication is needed again."
    ),
    "stale-records": (
        "Drop part of the merged records and overwrite business fields of others "
        "with stale values, undoing the incremental merge."
    ),
    "unjoined-sources": (
        "Split the integrated table back apart by dropping the right-hand columns, "
        "leaving only one unjoined source."
    ),
    "partial-sources": (
        "Remove a share of the combined rows so the output no longer covers all "
        "source tables."
    ),
    "stripped-labels": (
        "Corrupt the labeled data by mislabeling or irrelevant features: strip the "
        "assigned labels so every record must be classified again."
    ),
    "identity": "Copy the data unchanged; no disruption is introduced.",
}

_NOISE_PREAMBLE = '''import csv
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


def text_column(header):
    for name in ("text", "content", "description"):
        if name in header:
            return name
    return header[-1] if header else "text"

'''

_NOISE_BODIES = {
    "blocked-words": '''
BAD_WORDS = ["damn", "crap", "bitch", "bastard", "asshole"]


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    column = text_column(header)
    noisy = list(rows)
    for index in range(6 * len(rows)):
        template = dict(rows[index % len(rows)])
        template["id"] = "noise-%04d" % index
        template[column] = "Why is this %s service still broken" % BAD_WORDS[index % len(BAD_WORDS)]
        noisy.append(template)
    save_rows(job["output"], noisy, header)


if __name__ == "__main__":
    main()
''',
    "symbol-noise": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    column = text_column(header)
    noisy = list(rows)
    for index in range(6 * len(rows)):
        template = dict(rows[index % len(rows)])
        template["id"] = "noise-%04d" % index
        template[column] = "?!#@" * (10 + index % 5)
        noisy.append(template)
    save_rows(job["output"], noisy, header)


if __name__ == "__main__":
    main()
''',
    "html-tags": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    column = text_column(header)
    for index, row in enumerate(rows):
        if index % 5 == 0:
            continue
        row[column] = "<p>%s</p> <a href='http://x'>link</a>" % row.get(column, "")
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
''',
    "date-formats": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    targets = [c for c in header if "date" in c.lower()] or header[1:2]
    for index, row in enumerate(rows):
        if index % 5 == 0:
            continue
        for column in targets:
            value = str(row.get(column) or "")
            parts = value.split("-")
            if len(parts) == 3:
                if index % 2:
                    row[column] = "%s/%s/%s" % (int(parts[1]), int(parts[2]), parts[0])
                else:
                    row[column] = "%s.%s.%s" % (parts[0], parts[1], parts[2])
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
''',
    "missing-cells": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    targets = [c for c in header if c not in ("id", "text_id")]
    for index, row in enumerate(rows):
        for offset, column in enumerate(targets):
            if (index + offset) % 3 == 1:
                row[column] = ""
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
''',
    "duplicates": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    noisy = list(rows)
    for index in range(6 * len(rows)):
        noisy.append(dict(rows[index % len(rows)]))
    save_rows(job["output"], noisy, header)


if __name__ == "__main__":
    main()
''',
    "stale-records": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    business = [c for c in header if c not in ("id", "updated_at")]
    noisy = []
    for index, row in enumerate(rows):
        if index % 2 == 1:
            continue
        kept = dict(row)
        if index % 6 != 0:
            for column in business:
                kept[column] = "stale"
        noisy.append(kept)
    save_rows(job["output"], noisy, header)


if __name__ == "__main__":
    main()
''',
    "unjoined-sources": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    keep = [c for c in header if not c.endswith("_right")][: max(1, len(header) // 2)]
    noisy = [{c: row.get(c, "") for c in keep} for row in rows]
    save_rows(job["output"], noisy, keep)


if __name__ == "__main__":
    main()
''',
    "partial-sources": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    noisy = [row for index, row in enumerate(rows) if index % 4 == 0]
    save_rows(job["output"], noisy, header)


if __name__ == "__main__":
    main()
''',
    "stripped-labels": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    label = header[-1]
    keep = [c for c in header if c != label]
    noisy = [{c: row.get(c, "") for c in keep} for row in rows]
    save_rows(job["output"], noisy, keep)


if __name__ == "__main__":
    main()
''',
    "identity": '''
def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    rows, header = load_rows(job["inputs"][0])
    save_rows(job["output"], rows, header)


if __name__ == "__main__":
    main()
''',
}

_EVAL_SCRIPT = '''import json
from pathlib import Path


def load_ids(path):
    ids = set()
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                ids.add(str(json.loads(line).get("id")))
    return ids


def main():
    job = json.loads(Path("job.json").read_text(encoding="utf-8"))
    expected = load_ids(job["expected"])
    processed = load_ids(job["processed"])
    tp = len(expected & processed)
    precision = tp / len(processed) if processed else 0.0
    recall = tp / len(expected) if expected else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    print(json.dumps({"eval_score": "%.4f" % f1}))


if __name__ == "__main__":
    main()
'''


def _fenced(source: str) -> str:
    return f"Here is the script.\n\n```python\n{source}```\n"


class ScriptedGovernanceMock:
    """Prompt -> reply function; plug into MockBackend."""

    def __call__(self, prompt: str) -> str:
        header = prompt.splitlines()[0] if prompt else ""
        if header.startswith("# grounding prompt"):
            return self._ground(prompt)
        if header.startswith("# contract extraction prompt"):
            return self._contracts(prompt)
        if header.startswith("# codegen prompt"):
            return self._codegen(prompt)
        if header.startswith("# feedback prompt"):
            return self._feedback(prompt)
        if header.startswith("# reversed-objective prompt"):
            return self._reverse(prompt)
        if header.startswith("# noise-code prompt"):
            return self._noise(prompt)
        if header.startswith("# eval-script prompt"):
            return _fenced(_EVAL_SCRIPT)
        return "I do not recognize this request."

    # -- planner prompts --

    def _ground(self, prompt: str) -> str:
        objective = _section(prompt, "Instruction:\n", "\n\nData schema: ")
        schema_line = _section(prompt, "Data schema: ", "\n")
        _, columns = _parse_schema(schema_line)
        names = [name for name, _ in columns]
        referenced: list[str] = []
        for step in split_steps(objective):
            for column in _columns_in(step, names):
                if column not in referenced:
                    referenced.append(column)
        if not referenced and names:
            referenced = [names[-1]]
        reply = {
            "feasible": True,
            "normalized_goal": objective,
            "infeasibility_reason": None,
            "referenced_columns": referenced,
        }
        return json.dumps(reply, ensure_ascii=False)

    def _contracts(self, prompt: str) -> str:
        goal = _section(prompt, "Goal:\n", "\n\nData schema: ")
        schema_line = _section(prompt, "Data schema: ", "\n")
        _, columns = _parse_schema(schema_line)
        names = [name for name, _ in columns]
        entries = []
        for step in split_steps(goal):
            planned = match_step(step, names)
            entries.append(
                {"op": planned.op, "params": planned.params, "pre": planned.pre, "post": planned.post}
            )
        return json.dumps(entries, ensure_ascii=False)

    # -- executor prompts --

    def _codegen(self, prompt: str) -> str:
        op = _section(prompt, "Operator: ", "\n")
        params_line = _section(prompt, "Operator parameters: ", "\n")
        if op == "Solve Task":
            try:
                objective = str(json.loads(params_line).get("objective", ""))
            except json.JSONDecodeError:
                objective = ""
            schema_line = _section(prompt, "Input schema: ", "\n")
            _, columns = _parse_schema(schema_line)
            planned = match_step(objective, [name for name, _ in columns])
            op = planned.op
        if op in _BUGGY_SNIPPETS:
            return _fenced(_BUGGY_SNIPPETS[op])
        source = _load_snippet(op)
        if source is None:
            return _fenced(_COPY_SNIPPET)
        return _fenced(source)

    def _feedback(self, prompt: str) -> str:
        match = re.search(r'operator "([^"]+)"', prompt)
        op = match.group(1) if match else ""
        source = _load_snippet(op)
        if source is None:
            return _fenced(_COPY_SNIPPET)
        return _fenced(source)

    # -- benchkit prompts --

    def _reverse(self, prompt: str) -> str:
        objective = _section(prompt, "Original objective:\n", "\n\nTask category: ")
        hint = match_step(objective, []).noise_hint
        return _REVERSALS[hint]

    def _noise(self, prompt: str) -> str:
        reversed_objective = _section(prompt, "Reversed objective:\n", "\n\nSample rows")
        hint = "identity"
        for candidate, text in _REVERSALS.items():
            if reversed_objective.strip() == text:
                hint = candidate
                break
        return _fenced(_NOISE_PREAMBLE + _NOISE_BODIES[hint].lstrip("\n"))


def scripted_backend() -> Backend:
    return MockBackend(ScriptedGovernanceMock(), model_id="scripted-mock")
