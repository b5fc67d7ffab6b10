#!/usr/bin/env python3
"""Author the operator pack: canonical card copies, one sample fixture per
card (input + params + evaluator binding), and the committed expected
output produced by running the snippet once through the real sandbox."""

from __future__ import annotations

import json
import shutil
import sys
import tempfile
from pathlib import Path

from govdag.bundled import seed_library_path
from govdag.core.tabular import write_rows
from govdag.executor.codegen import CodeArtifact
from govdag.executor.library import load_card
from govdag.sandbox.runner import SandboxLimits, run_sandboxed

PACK = Path(__file__).resolve().parents[1] / "src" / "operator_assets" / "pack"


def jsonl(path: Path, rows) -> None:
    path.write_text("\n".join(json.dumps(r, ensure_ascii=False) for r in rows) + "\n", encoding="utf-8")


def sample_filter_blocklist(d: Path) -> dict:
    jsonl(d / "input.jsonl", [
        {"id": 1, "text": "The ticket was resolved quickly."},
        {"id": 2, "text": "This damn portal keeps crashing."},
        {"id": 3, "text": "Thanks for the clear invoice."},
        {"id": 4, "text": "What a crap rollout this was."},
        {"id": 5, "text": "Delivery arrived a day early."},
        {"id": 6, "text": "The manual answered my question."},
    ])
    return {
        "inputs": ["input.jsonl"],
        "params": {"column": "text", "blocklist": ["damn", "crap"]},
        "binding": {"kind": "builtin_filtering", "params": {"id_field": "id"}},
        "expected_suffix": ".jsonl",
    }


def sample_filter_symbols(d: Path) -> dict:
    jsonl(d / "input.jsonl", [
        {"id": 1, "text": "Normal sentence about shipping."},
        {"id": 2, "text": "?!#@$%&*?!#@$%&*?!#@$%&*"},
        {"id": 3, "text": "Another calm support message."},
        {"id": 4, "text": "###@@@!!!???***&&&$$$"},
    ])
    return {
        "inputs": ["input.jsonl"],
        "params": {"column": "text", "max_symbol_ratio": 0.3},
        "binding": {"kind": "builtin_filtering", "params": {"id_field": "id"}},
        "expected_suffix": ".jsonl",
    }


def sample_normalize_format(d: Path) -> dict:
    write_rows(d / "input.csv", ["id", "date"], [
        {"id": "1", "date": "03/15/2021"},
        {"id": "2", "date": "2022.11.02"},
        {"id": "3", "date": "2023-07-04"},
        {"id": "4", "date": "2020/01/30"},
        {"id": "5", "date": "March 5, 2021"},
    ])
    return {
        "inputs": ["input.csv"],
        "params": {"columns": ["date"]},
        "binding": {"kind": "builtin_refinement", "params": {"id_field": "id", "text_field": "date"}},
        "expected_suffix": ".csv",
    }


def sample_cast_type(d: Path) -> dict:
    write_rows(d / "input.csv", ["id", "count", "ratio"], [
        {"id": "1", "count": "3.0", "ratio": "1"},
        {"id": "2", "count": "7.0", "ratio": "0.5"},
        {"id": "3", "count": "11.0", "ratio": "2"},
    ])
    return {
        "inputs": ["input.csv"],
        "params": {"types": {"count": "integer", "ratio": "real"}},
        "binding": {"kind": "builtin_refinement", "params": {"id_field": "id", "text_field": "count"}},
        "expected_suffix": ".csv",
    }


def sample_impute_mean(d: Path) -> dict:
    write_rows(d / "input.csv", ["id", "age"], [
        {"id": "1", "age": "20"},
        {"id": "2", "age": ""},
        {"id": "3", "age": "40"},
        {"id": "4", "age": ""},
        {"id": "5", "age": "30"},
    ])
    return {
        "inputs": ["input.csv"],
        "params": {"columns": ["age"]},
        "binding": {"kind": "builtin_imputation", "params": {"atol": 1e-6}},
        "expected_suffix": ".csv",
    }


def sample_interpolate(d: Path) -> dict:
    write_rows(d / "input.csv", ["id", "reading"], [
        {"id": "1", "reading": "10.0"},
        {"id": "2", "reading": ""},
        {"id": "3", "reading": "14.0"},
        {"id": "4", "reading": ""},
        {"id": "5", "reading": "18.0"},
    ])
    return {
        "inputs": ["input.csv"],
        "params": {"columns": ["reading"]},
        "binding": {"kind": "builtin_imputation", "params": {"atol": 1e-6}},
        "expected_suffix": ".csv",
    }


def sample_dedup(d: Path) -> dict:
    jsonl(d / "input.jsonl", [
        {"id": "a", "name": "Ana"},
        {"id": "b", "name": "Bo"},
        {"id": "a", "name": "Ana"},
        {"id": "c", "name": "Cy"},
        {"id": "b", "name": "Bo"},
    ])
    return {
        "inputs": ["input.jsonl"],
        "params": {"key": "id"},
        "binding": {"kind": "builtin_dedup", "params": {"id_field": "id"}},
        "expected_suffix": ".jsonl",
    }


def sample_merge(d: Path) -> dict:
    jsonl(d / "baseline.jsonl", [
        {"id": "r1", "updated_at": "2024-01-01T00:00:00Z", "tier": "gold"},
        {"id": "r2", "updated_at": "2024-01-02T00:00:00Z", "tier": "silver"},
    ])
    write_rows(d / "increment.csv", ["id", "updated_at", "tier"], [
        {"id": "r2", "updated_at": "2025-01-02T00:00:00Z", "tier": "bronze"},
        {"id": "r3", "updated_at": "2025-01-03T00:00:00Z", "tier": "gold"},
    ])
    return {
        "inputs": ["baseline.jsonl", "increment.csv"],
        "params": {"key": "id", "timestamp": "updated_at"},
        "binding": {"kind": "builtin_dedup", "params": {"id_field": "id"}},
        "expected_suffix": ".jsonl",
    }


def sample_join(d: Path) -> dict:
    write_rows(d / "left.csv", ["k", "name", "status"], [
        {"k": "1", "name": "Ana", "status": "active"},
        {"k": "2", "name": "Bo", "status": "paused"},
    ])
    write_rows(d / "right.csv", ["k", "status", "vip"], [
        {"k": "1", "status": "gold", "vip": "true"},
        {"k": "2", "status": "basic", "vip": "false"},
    ])
    return {
        "inputs": ["left.csv", "right.csv"],
        "params": {"keys": ["k"]},
        "binding": {"kind": "builtin_integration", "params": {}},
        "expected_suffix": ".csv",
    }


def sample_concat(d: Path) -> dict:
    write_rows(d / "a.csv", ["id", "answer"], [
        {"id": "a1", "answer": "yes"},
        {"id": "a2", "answer": "no"},
    ])
    write_rows(d / "b.csv", ["id", "channel"], [
        {"id": "b1", "channel": "web"},
    ])
    return {
        "inputs": ["a.csv", "b.csv"],
        "params": {},
        "binding": {"kind": "builtin_integration", "params": {}},
        "expected_suffix": ".csv",
    }


def sample_sentiment(d: Path) -> dict:
    jsonl(d / "input.jsonl", [
        {"text_id": "1", "content": "The support was great and the problem was solved."},
        {"text_id": "2", "content": "The update made everything terrible and slow."},
        {"text_id": "3", "content": "The meeting is scheduled for Tuesday."},
    ])
    return {
        "inputs": ["input.jsonl"],
        "params": {"content_field": "content", "label_field": "sentiment"},
        "binding": {
            "kind": "builtin_classification",
            "params": {"id_field": "text_id", "label_field": "sentiment"},
        },
        "expected_suffix": ".jsonl",
    }


def sample_keyword_rules(d: Path) -> dict:
    jsonl(d / "input.jsonl", [
        {"id": 1, "text": "The laptop shipped with a new phone app."},
        {"id": 2, "text": "The soccer match went to extra time."},
        {"id": 3, "text": "Try the pizza at the new restaurant."},
        {"id": 4, "text": "The agenda was approved unanimously."},
    ])
    return {
        "inputs": ["input.jsonl"],
        "params": {"column": "text", "label_field": "label"},
        "binding": {"kind": "builtin_classification", "params": {"id_field": "id", "label_field": "label"}},
        "expected_suffix": ".jsonl",
    }


SAMPLES = {
    "filter-rows-by-blocklist": sample_filter_blocklist,
    "filter-symbol-heavy-text": sample_filter_symbols,
    "normalize-format": sample_normalize_format,
    "cast-column-type": sample_cast_type,
    "impute-missing-values": sample_impute_mean,
    "interpolate-missing-numeric": sample_interpolate,
    "deduplicate-rows": sample_dedup,
    "merge-incremental-updates": sample_merge,
    "join-tables-on-key": sample_join,
    "concatenate-tables": sample_concat,
    "label-sentiment-by-lexicon": sample_sentiment,
    "label-by-keyword-rules": sample_keyword_rules,
}


def main() -> None:
    cards_dir = PACK / "cards"
    samples_dir = PACK / "samples"
    for directory in (cards_dir, samples_dir):
        if directory.exists():
            shutil.rmtree(directory)
        directory.mkdir(parents=True)

    for slug in sorted(SAMPLES):
        shutil.copytree(seed_library_path() / slug, cards_dir / slug)

    for slug, author in SAMPLES.items():
        sample_dir = samples_dir / slug
        sample_dir.mkdir(parents=True)
        meta = author(sample_dir)
        card = load_card(cards_dir / slug)
        inputs = [sample_dir / name for name in meta["inputs"]]
        expected_name = f"expected{meta.pop('expected_suffix')}"
        workdir = Path(tempfile.mkdtemp(prefix="make-assets-"))
        outcome = run_sandboxed(
            CodeArtifact(node_id=slug, source=card.snippet),
            inputs,
            SandboxLimits(wall_clock_s=60.0),
            workdir=workdir,
            job={
                "inputs": [f"inputs/{p.name}" for p in inputs],
                "output": f"out/result{Path(expected_name).suffix}",
                "params": meta["params"],
            },
        )
        if not outcome.ok:
            print(f"{slug}: snippet failed\n{outcome.stderr}", file=sys.stderr)
            sys.exit(1)
        shutil.copyfile(workdir / "out" / f"result{Path(expected_name).suffix}", sample_dir / expected_name)
        meta["expected"] = expected_name
        (sample_dir / "sample.json").write_text(
            json.dumps(meta, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        print(f"authored {slug}")


if __name__ == "__main__":
    main()
