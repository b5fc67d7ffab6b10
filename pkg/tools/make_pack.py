#!/usr/bin/env python3
"""Author the bundled sample pack: 12 operator-level tasks (2 per category)
plus 3 DAG-level tasks (lengths 3-4).

Noisy inputs are authored here as literals/generators; every ground truth
is produced by running the seed-library snippet for the task's operator
through the real sandbox, with the parameters the scripted mock would
plan. The script finishes by running the consistency gate on every task
and fails loudly if any task misses it.
"""

from __future__ import annotations

import json
import shutil
import sys
import tempfile
from pathlib import Path

from govdag.benchkit.compose import compose_dag_task
from govdag.benchkit.consistency import consistency_check
from govdag.core.manifest import load_pack, write_pack_meta, write_task
from govdag.core.tabular import infer_schema, write_rows
from govdag.core.types import EvaluatorBinding, EvaluatorKind, TaskCategory, TaskLevel, TaskSpec
from govdag.executor.codegen import CodeArtifact
from govdag.gateway.scripted import _load_snippet, match_step
from govdag.sandbox.runner import SandboxLimits, run_sandboxed

PACK = Path(__file__).resolve().parents[1] / "src" / "govdag" / "bundled" / "pack"

CLEAN_TEXTS = [
    "The customer service team resolved the request promptly.",
    "The refund policy covers returns within thirty days of purchase.",
    "The warranty is valid for one year from the purchase date.",
    "Shipping updates are sent by email at each delivery milestone.",
    "The subscription can be paused from the account settings page.",
    "Invoices are available for download in the billing section.",
    "Support hours are Monday through Friday, nine to five.",
]

BLOCKED = ["damn", "crap", "bastard", "bitch", "asshole"]


def apply_op(op_name: str, objective: str, inputs: list[Path], out_path: Path, schema_cols: list[str]) -> None:
    """Run the library snippet for the operator the scripted mock would
    plan for this objective, writing its output to out_path."""
    planned = match_step(objective, schema_cols)
    source = _load_snippet(planned.op)
    assert source is not None, f"no snippet for op {planned.op}"
    workdir = Path(tempfile.mkdtemp(prefix="make-pack-"))
    job = {
        "inputs": [f"inputs/{p.name}" for p in inputs],
        "output": f"out/result{out_path.suffix}",
        "params": planned.params,
    }
    outcome = run_sandboxed(
        CodeArtifact(node_id="author", source=source),
        inputs,
        SandboxLimits(wall_clock_s=60.0),
        workdir=workdir,
        job=job,
    )
    assert outcome.ok, f"{op_name}: snippet failed: {outcome.stderr}"
    shutil.copyfile(workdir / job["output"], out_path)


def task_dir(task_id: str) -> Path:
    d = PACK / "tasks" / task_id / "data"
    d.mkdir(parents=True, exist_ok=True)
    return d


def binding(kind: str, **params) -> EvaluatorBinding:
    return EvaluatorBinding(kind=EvaluatorKind(kind), params=params)


def jsonl(path: Path, rows: list[dict]) -> None:
    path.write_text("\n".join(json.dumps(r, ensure_ascii=False) for r in rows) + "\n", encoding="utf-8")


def op_task(
    task_id: str,
    category: str,
    objective: str,
    inputs: list[str],
    gt: str,
    evaluator: EvaluatorBinding,
) -> TaskSpec:
    return TaskSpec(
        id=task_id,
        level=TaskLevel.OPERATOR,
        category=TaskCategory(category),
        objective=objective,
        inputs=tuple(inputs),
        ground_truth=gt,
        evaluator=evaluator,
    )


def build_f1() -> TaskSpec:
    d = task_dir("filter-blocked-words")
    rows = [{"id": i, "text": CLEAN_TEXTS[i]} for i in range(7)]
    for i in range(36):
        rows.append({"id": 100 + i, "text": f"Fix this {BLOCKED[i % 5]} service right now."})
    jsonl(d / "noisy.jsonl", rows)
    objective = (
        "Process the JSONL file and filter out every row whose text field contains "
        "blocked words (such as damn, crap, bastard, bitch, asshole); keep the field "
        "structure of the surviving rows unchanged."
    )
    apply_op("f1", objective, [d / "noisy.jsonl"], d / "gt.jsonl", ["id", "text"])
    return op_task(
        "filter-blocked-words", "filtering", objective,
        ["data/noisy.jsonl"], "data/gt.jsonl", binding("builtin_filtering", id_field="id"),
    )


def build_f2() -> TaskSpec:
    d = task_dir("filter-symbol-noise")
    rows = [{"id": i, "text": CLEAN_TEXTS[i]} for i in range(7)]
    for i in range(36):
        rows.append({"id": 200 + i, "text": "?!#@$%&*" * (6 + i % 4)})
    jsonl(d / "noisy.jsonl", rows)
    objective = (
        "Filter out records whose text field has a high proportion of symbol "
        "characters (more than 30% of the characters are symbols); write the "
        "surviving records unchanged."
    )
    apply_op("f2", objective, [d / "noisy.jsonl"], d / "gt.jsonl", ["id", "text"])
    return op_task(
        "filter-symbol-noise", "filtering", objective,
        ["data/noisy.jsonl"], "data/gt.jsonl", binding("builtin_filtering", id_field="id"),
    )


def build_r1() -> TaskSpec:
    d = task_dir("standardize-dates")
    events = ["signup", "renewal", "upgrade", "cancel", "payment"]
    rows = []
    iso = ["2021-03-15", "2022-11-02"]
    mdy = ["03/15/2021", "11/02/2022", "07/04/2023", "01/30/2020"]
    dotted = ["2021.3.15", "2022.11.2", "2023.7.4", "2020.1.30"]
    dates = [iso[0], mdy[0], dotted[0], mdy[1], dotted[1], iso[1], mdy[2], dotted[2], mdy[3], dotted[3]]
    for i, date in enumerate(dates):
        rows.append({"id": str(i + 1), "event": events[i % 5], "date": date})
    write_rows(d / "noisy.csv", ["id", "event", "date"], rows)
    objective = (
        "Standardize the date column of the CSV file to the ISO format YYYY-MM-DD; "
        "all other columns stay untouched."
    )
    apply_op("r1", objective, [d / "noisy.csv"], d / "gt.csv", ["id", "event", "date"])
    return op_task(
        "standardize-dates", "refinement", objective,
        ["data/noisy.csv"], "data/gt.csv",
        binding("builtin_refinement", id_field="id", text_field="date"),
    )


def build_r2() -> TaskSpec:
    d = task_dir("strip-html")
    rows = []
    for i in range(10):
        body = CLEAN_TEXTS[i % 7]
        if i % 5 != 0:
            body = f"<p>{body}</p> <a href='http://example.com/{i}'>more</a>"
        rows.append({"id": f"id_{i:04d}", "topic": "support", "text": body})
    jsonl(d / "noisy.jsonl", rows)
    objective = (
        "Remove all HTML tags (such as <p> or <a href='url'>) from the text field of "
        "each record, keeping the field structure unchanged."
    )
    apply_op("r2", objective, [d / "noisy.jsonl"], d / "gt.jsonl", ["id", "topic", "text"])
    return op_task(
        "strip-html", "refinement", objective,
        ["data/noisy.jsonl"], "data/gt.jsonl",
        binding("builtin_refinement", id_field="id", text_field="text"),
    )


def build_i1() -> TaskSpec:
    d = task_dir("impute-mean")
    ages = ["22", "58", "", "40", "35", "", "62", "54", "", "45", "68", "57"]
    incomes = ["37110.5", "55531.25", "35616.75", "", "49251.0", "47227.0", "68338.5", "", "47682.25", "58632.0", "57984.5", "56190.75"]
    rows = [
        {"id": str(i + 1), "age": ages[i], "income": incomes[i]}
        for i in range(12)
    ]
    write_rows(d / "noisy.csv", ["id", "age", "income"], rows)
    objective = (
        "Fill the missing values in the age and income columns of the CSV file with "
        "the column mean; leave every present value unchanged."
    )
    apply_op("i1", objective, [d / "noisy.csv"], d / "gt.csv", ["id", "age", "income"])
    return op_task(
        "impute-mean", "imputation", objective,
        ["data/noisy.csv"], "data/gt.csv",
        binding("builtin_imputation", atol=1e-6),
    )


def build_i2() -> TaskSpec:
    d = task_dir("interpolate-series")
    temps = ["12.0", "", "14.5", "15.0", "", "", "18.5", "19.0", "", "20.5", "21.0", ""]
    rows = [{"id": str(i + 1), "day": str(i + 1), "temperature": temps[i]} for i in range(12)]
    write_rows(d / "noisy.csv", ["id", "day", "temperature"], rows)
    objective = (
        "Interpolate the missing temperature values in the CSV file linearly over the "
        "row order; recorded temperature readings stay unchanged."
    )
    apply_op("i2", objective, [d / "noisy.csv"], d / "gt.csv", ["id", "day", "temperature"])
    return op_task(
        "interpolate-series", "imputation", objective,
        ["data/noisy.csv"], "data/gt.csv",
        binding("builtin_imputation", atol=1e-6),
    )


def build_d1() -> TaskSpec:
    d = task_dir("dedup-exact")
    base = [
        {"id": "u01", "name": "Alice", "city": "Lisbon"},
        {"id": "u02", "name": "Bob", "city": "Porto"},
        {"id": "u03", "name": "Carol", "city": "Braga"},
        {"id": "u04", "name": "Dave", "city": "Faro"},
        {"id": "u05", "name": "Eve", "city": "Evora"},
        {"id": "u06", "name": "Frank", "city": "Aveiro"},
    ]
    rows = list(base)
    for i in range(34):
        rows.append(dict(base[i % 6]))
    jsonl(d / "noisy.jsonl", rows)
    objective = (
        "Remove duplicate records from the JSONL file so that each id appears exactly "
        "once, keeping the first occurrence of every id."
    )
    apply_op("d1", objective, [d / "noisy.jsonl"], d / "gt.jsonl", ["id", "name", "city"])
    return op_task(
        "dedup-exact", "dedup_consistency", objective,
        ["data/noisy.jsonl"], "data/gt.jsonl", binding("builtin_dedup", id_field="id"),
    )


def build_d2() -> TaskSpec:
    d = task_dir("merge-incremental")
    tiers = ["gold", "silver", "bronze"]
    baseline = []
    for i in range(8):
        baseline.append(
            {
                "id": f"C{i:03d}",
                "updated_at": f"2024-01-{i + 1:02d}T10:00:00Z",
                "name": f"Customer{i}",
                "tier": tiers[i % 3],
            }
        )
    jsonl(d / "baseline.jsonl", baseline)
    increment = []
    for i in range(6):  # newer versions of C000..C005
        increment.append(
            {
                "id": f"C{i:03d}",
                "updated_at": f"2025-06-{i + 1:02d}T09:30:00Z",
                "name": f"Customer{i}",
                "tier": tiers[(i + 1) % 3],
            }
        )
    for i in range(12):  # brand new keys
        increment.append(
            {
                "id": f"C{100 + i:03d}",
                "updated_at": f"2025-07-{i + 1:02d}T08:15:00Z",
                "name": f"New{100 + i}",
                "tier": tiers[i % 3],
            }
        )
    write_rows(d / "increment.csv", ["id", "updated_at", "name", "tier"], increment)
    objective = (
        "Merge the incremental CSV file into the baseline JSONL file by the primary "
        "key id: append rows with new keys, ignore identical records, and for the "
        "same key with different business fields keep the record with the latest "
        "updated_at."
    )
    apply_op(
        "d2", objective, [d / "baseline.jsonl", d / "increment.csv"], d / "gt.jsonl",
        ["id", "updated_at", "name", "tier"],
    )
    return op_task(
        "merge-incremental", "dedup_consistency", objective,
        ["data/baseline.jsonl", "data/increment.csv"], "data/gt.jsonl",
        binding("builtin_dedup", id_field="id"),
    )


def build_g1() -> TaskSpec:
    d = task_dir("join-customers")
    countries = [("US", "CA"), ("US", "NY"), ("CN", "BJ"), ("CN", "SH"), ("DE", "BE"), ("FR", "IX"), ("US", "TX"), ("JP", "TK")]
    left = []
    for i, (country, region) in enumerate(countries):
        left.append(
            {
                "country": country,
                "region": region,
                "customer_id": str(1000 + i),
                "email": f"user{i}@example.com",
                "signup_date": f"2021-0{i % 9 + 1}-10",
                "status": "active" if i % 2 == 0 else "inactive",
            }
        )
    write_rows(d / "customers1.csv", ["country", "region", "customer_id", "email", "signup_date", "status"], left)
    right = []
    for i, (country, region) in enumerate(countries[:6]):  # 6 matching keys
        right.append(
            {
                "country": country,
                "region": region,
                "customer_id": str(1000 + i),
                "email": f"user{i}.alt@example.com",
                "last_order_date": f"2023-0{i % 9 + 1}-02",
                "status": "gold" if i % 2 == 0 else "paused",
                "vip": "true" if i % 3 == 0 else "false",
            }
        )
    for i in range(2):  # right-only keys, dropped by the inner join
        right.append(
            {
                "country": "BR",
                "region": f"R{i}",
                "customer_id": str(9000 + i),
                "email": f"extra{i}@example.com",
                "last_order_date": "2023-09-09",
                "status": "active",
                "vip": "false",
            }
        )
    write_rows(d / "customers2.csv", ["country", "region", "customer_id", "email", "last_order_date", "status", "vip"], right)
    objective = (
        "Join customers1.csv and customers2.csv on the composite key (country, "
        "region, customer_id); suffix conflicting non-key columns with _left and "
        "_right, keep the key columns once, and output only rows present in both files."
    )
    apply_op(
        "g1", objective, [d / "customers1.csv", d / "customers2.csv"], d / "gt.csv",
        ["country", "region", "customer_id", "email", "signup_date", "status"],
    )
    return op_task(
        "join-customers", "integration", objective,
        ["data/customers1.csv", "data/customers2.csv"], "data/gt.csv",
        binding("builtin_integration"),
    )


def build_g2() -> TaskSpec:
    d = task_dir("concat-surveys")
    a = [
        {"respondent_id": f"A{i}", "answer": f"answer {i}", "score": str(3 + i % 3)}
        for i in range(6)
    ]
    write_rows(d / "survey_a.csv", ["respondent_id", "answer", "score"], a)
    b = [
        {"respondent_id": f"B{i}", "answer": f"reply {i}", "channel": "web" if i % 2 == 0 else "phone"}
        for i in range(5)
    ]
    write_rows(d / "survey_b.csv", ["respondent_id", "answer", "channel"], b)
    objective = (
        "Concatenate survey_a.csv and survey_b.csv into one CSV file: the output "
        "header is the union of all input columns and cells absent from a source "
        "stay empty."
    )
    apply_op(
        "g2", objective, [d / "survey_a.csv", d / "survey_b.csv"], d / "gt.csv",
        ["respondent_id", "answer", "score"],
    )
    return op_task(
        "concat-surveys", "integration", objective,
        ["data/survey_a.csv", "data/survey_b.csv"], "data/gt.csv",
        binding("builtin_integration"),
    )


def build_c1() -> TaskSpec:
    d = task_dir("label-sentiment")
    contents = [
        "The latte at this coffee shop is delicious, I will come back.",
        "Customer support was great and the problem was solved.",
        "The soundtrack is moving, I recommend it to everyone.",
        "The project launched on time and everyone is satisfied.",
        "The service attitude was terrible, I will never come again.",
        "The product broke after two days, very disappointing.",
        "The courier is delayed for a week, so annoying.",
        "The update made everything slow and the app feels bad now.",
        "This is the second page of the contract.",
        "The air conditioning is set to 25 degrees.",
        "The meeting starts at ten in the morning.",
        "The report covers the third quarter of the year.",
    ]
    rows = [{"text_id": f"{i + 1:04d}", "content": contents[i]} for i in range(12)]
    jsonl(d / "noisy.jsonl", rows)
    objective = (
        "Assign a sentiment label to each record of the JSONL file: add a sentiment "
        "field with the value Positive, Neutral or Negative based on the content field."
    )
    apply_op("c1", objective, [d / "noisy.jsonl"], d / "gt.jsonl", ["text_id", "content"])
    return op_task(
        "label-sentiment", "classification", objective,
        ["data/noisy.jsonl"], "data/gt.jsonl",
        binding("builtin_classification", id_field="text_id", label_field="sentiment"),
    )


def build_c2() -> TaskSpec:
    d = task_dir("label-topics")
    texts = [
        "The new laptop ships with a faster processor.",
        "Our soccer team won the tournament final.",
        "The restaurant added a seasonal menu this week.",
        "The app update fixes the login software bug.",
        "She trains at the gym before every match.",
        "The coffee and pizza at the market are popular.",
        "The phone camera improved with the new device.",
        "The athlete broke the national race record.",
        "Try the new recipe with roasted vegetables.",
        "The quarterly budget was approved yesterday.",
        "The committee will meet again next month.",
        "The library extended its opening hours.",
    ]
    rows = [{"id": i + 1, "text": texts[i]} for i in range(12)]
    jsonl(d / "noisy.jsonl", rows)
    objective = (
        "Categorize each record of the JSONL file by topic: add a label field set to "
        "food, sports or tech when the text mentions those topics; records without a "
        "match get the label other."
    )
    apply_op("c2", objective, [d / "noisy.jsonl"], d / "gt.jsonl", ["id", "text"])
    return op_task(
        "label-topics", "classification", objective,
        ["data/noisy.jsonl"], "data/gt.jsonl",
        binding("builtin_classification", id_field="id", label_field="label"),
    )


FROZEN_SCORES = {
    "filter-blocked-words": 0.55,
    "filter-symbol-noise": 0.35,
    "standardize-dates": 0.3,
    "strip-html": 0.5,
    "impute-mean": 0.25,
    "interpolate-series": 0.2,
    "dedup-exact": 0.4,
    "merge-incremental": 0.15,
    "join-customers": 0.2,
    "concat-surveys": 0.6,
    "label-sentiment": 0.45,
    "label-topics": 0.5,
}

DAG_SEEDS = {
    "dag-clean-text": ["filter-blocked-words", "strip-html", "dedup-exact"],
    "dag-csv-series": ["standardize-dates", "interpolate-series", "dedup-exact"],
    "dag-label-pipeline": ["filter-symbol-noise", "strip-html", "label-topics", "dedup-exact"],
}


def build_dag_data(task: TaskSpec, pack, noisy_rows: list[dict], header: list[str]) -> None:
    """Write the dag task's noisy input, then chain the per-step snippets to
    produce stage ground truths (the final stage is the task gt)."""
    d = task_dir(task.id)
    suffix = Path(task.inputs[0]).suffix
    noisy = d / f"noisy{suffix}"
    if suffix == ".jsonl":
        jsonl(noisy, noisy_rows)
    else:
        write_rows(noisy, header, noisy_rows)

    seeds = [pack.task(step.subtask_id) for step in task.dag_composition]
    current = noisy
    for index, seed in enumerate(seeds, start=1):
        is_last = index == len(seeds)
        out = d / (f"gt{suffix}" if is_last else f"stage_{index}{suffix}")
        schema = infer_schema(current)
        apply_op(seed.id, seed.objective, [current], out, list(schema.column_names))
        current = out


def build_dag1(pack) -> TaskSpec:
    task = compose_dag_task(DAG_SEEDS["dag-clean-text"], pack, pack.alpha, task_id="dag-clean-text")
    rows = []
    keep_texts = [
        "The billing portal shows every invoice in one place.",
        "Delivery notifications arrive within the hour.",
        "Account recovery requires the registered email address.",
        "The knowledge base answers the common questions.",
    ]
    for i in range(12):  # survivors; 8 with html, ids r00..r09 with two duplicated ids
        rid = f"r{i % 10:02d}"
        body = keep_texts[i % 4]
        if i % 3 != 0:
            body = f"<p>{body}</p> <a href='http://example.com/{i}'>link</a>"
        rows.append({"id": rid, "text": body})
    for i in range(60):
        rows.append({"id": f"x{i:02d}", "text": f"This {BLOCKED[i % 5]} queue never moves."})
    build_dag_data(task, pack, rows, ["id", "text"])
    return task


def build_dag2(pack) -> TaskSpec:
    task = compose_dag_task(DAG_SEEDS["dag-csv-series"], pack, pack.alpha, task_id="dag-csv-series")
    rows = []
    temps = ["", "13.5", "", "15.0", "16.5", "", "18.0", "", "19.5", "20.0", "", "22.0", "23.5", "", "25.0"]
    for i in range(15):
        if i % 5 == 0:
            date = f"2023-04-{i + 1:02d}"
        elif i % 2 == 0:
            date = f"0{i % 9 + 1}/{i + 1:02d}/2023"
        else:
            date = f"2023.{i % 9 + 1}.{i + 1}"
        rows.append({"id": f"s{i:02d}", "date": date, "temperature": temps[i]})
    for i in range(3):  # duplicate ids for the dedup stage
        rows.append(dict(rows[i * 4]))
    build_dag_data(task, pack, rows, ["id", "date", "temperature"])
    return task


def build_dag3(pack) -> TaskSpec:
    task = compose_dag_task(DAG_SEEDS["dag-label-pipeline"], pack, pack.alpha, task_id="dag-label-pipeline")
    texts = [
        "The laptop firmware update improves the device battery.",
        "The soccer match ended after a dramatic race to the finish.",
        "The pizza place launched a new menu with a tasting recipe.",
        "The committee published the annual report yesterday.",
    ]
    rows = []
    for i in range(20):  # survivors; 14 wrapped in html, two duplicated ids
        rid = f"t{i % 18:02d}"
        body = texts[i % 4]
        if i % 10 != 0:
            body = f"<p>{body}</p> <a href='http://example.com/{i}'>src</a>"
        rows.append({"id": rid, "text": body})
    for i in range(60):
        rows.append({"id": f"z{i:02d}", "text": "#@!?%&" * (8 + i % 3)})
    build_dag_data(task, pack, rows, ["id", "text"])
    return task


def main() -> None:
    if PACK.exists():
        shutil.rmtree(PACK)
    PACK.mkdir(parents=True)

    builders = [
        build_f1, build_f2, build_r1, build_r2, build_i1, build_i2,
        build_d1, build_d2, build_g1, build_g2, build_c1, build_c2,
    ]
    specs = []
    for builder in builders:
        spec = builder()
        write_task(PACK, spec)
        specs.append(spec)
    write_pack_meta(PACK, pack_id="govdag-sample", alpha=1.0, frozen_scores=FROZEN_SCORES)

    pack = load_pack(PACK)
    for dag_builder in (build_dag1, build_dag2, build_dag3):
        spec = dag_builder(pack)
        write_task(PACK, spec)

    pack = load_pack(PACK)
    failures = []
    for task in pack.tasks:
        result = consistency_check(pack, task)
        status = "PASS" if result.passed else "FAIL"
        print(f"{status}  {task.id:24s} gt={result.gt_score:.4f} noisy={result.noisy_score:.4f}")
        if not result.passed:
            failures.append((task.id, result))
    if failures:
        print(f"\n{len(failures)} task(s) miss the consistency gate", file=sys.stderr)
        sys.exit(1)
    print(f"\npack OK: {len(pack.tasks)} tasks at {PACK}")


if __name__ == "__main__":
    main()
