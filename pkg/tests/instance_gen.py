"""Randomized small evaluator instances (shared between the unit tests and
the acceptance suite's oracle-equivalence runs)."""

from __future__ import annotations

import random


def filtering_instance(rng: random.Random) -> tuple[list[dict], list[dict]]:
    universe = list(range(rng.randint(0, 100)))
    expected = [{"id": i} for i in universe if rng.random() < 0.6]
    processed = [{"id": i} for i in universe if rng.random() < 0.6]
    if rng.random() < 0.1:
        processed = []
    return expected, processed


def refinement_instance(rng: random.Random) -> tuple[list[dict], list[dict]]:
    n = rng.randint(1, 100)
    words = ["alpha", "beta", "gamma", "delta"]
    expected = [{"id": i, "text": f"{rng.choice(words)} {rng.choice(words)}"} for i in range(n)]
    processed = []
    for row in expected:
        roll = rng.random()
        if roll < 0.2:
            continue  # missing id
        text = row["text"]
        if roll < 0.5:
            text = rng.choice(words)  # mismatch
        elif roll < 0.7:
            text = "  " + text.replace(" ", "   ") + " "  # whitespace-equivalent
        processed.append({"id": row["id"], "text": text})
    return expected, processed


def imputation_instance(rng: random.Random):
    n_rows = rng.randint(1, 40)
    header = ["id", "a", "b"]
    raw_rows, gt_rows, cand_rows = [], [], []
    for i in range(n_rows):
        a = round(rng.uniform(0, 50), 3)
        b = round(rng.uniform(0, 50), 3)
        missing_a = rng.random() < 0.3
        missing_b = rng.random() < 0.3
        raw_rows.append({"id": str(i), "a": "" if missing_a else str(a), "b": "" if missing_b else str(b)})
        gt_rows.append({"id": str(i), "a": str(a), "b": str(b)})
        cand = dict(gt_rows[-1])
        roll = rng.random()
        if roll < 0.15 and missing_a:
            cand["a"] = ""  # left unfilled
        elif roll < 0.3 and missing_a:
            cand["a"] = str(a + rng.choice([0.5, -0.5]))  # wrong fill
        elif roll < 0.4 and not missing_a:
            cand["a"] = str(a + 1.0)  # modified original
        cand_rows.append(cand)
    return (header, cand_rows), (header, gt_rows), (header, raw_rows)


def dedup_instance(rng: random.Random) -> tuple[list[dict], list[dict]]:
    n = rng.randint(1, 50)
    gt = [{"id": str(i), "name": f"n{i}", "tier": rng.choice(["a", "b"])} for i in range(n)]
    predicted: list[dict] = []
    for row in gt:
        if rng.random() < 0.8:
            predicted.append(dict(row))
        if rng.random() < 0.3:
            predicted.append(dict(row))  # duplicate
        if rng.random() < 0.2:
            broken = dict(row)
            broken["tier"] = "z"
            predicted.append(broken)  # field mismatch
    for i in range(rng.randint(0, 5)):
        predicted.append({"id": f"x{i}", "name": "ghost", "tier": "a"})  # unknown id
    rng.shuffle(predicted)
    if rng.random() < 0.05:
        predicted = []
    return gt, predicted


def integration_instance(rng: random.Random):
    header = ["k", "v"]
    n = rng.randint(1, 60)
    gt_rows = [{"k": str(i % 20), "v": str(rng.randint(0, 5))} for i in range(n)]
    roll = rng.random()
    if roll < 0.25:
        predicted = [dict(r) for r in gt_rows]
        rng.shuffle(predicted)  # same multiset, different order
    elif roll < 0.5:
        predicted = [dict(r, extra="1") for r in gt_rows]  # extra column, ignored
        rng.shuffle(predicted)
    elif roll < 0.75:
        predicted = [dict(r) for r in gt_rows]
        if predicted:
            predicted[rng.randrange(len(predicted))]["v"] = "99"  # multiset mismatch
    else:
        predicted = [{"k": r["k"]} for r in gt_rows]  # missing column
    return header, gt_rows, predicted


def classification_instance(rng: random.Random) -> tuple[list[dict], list[dict]]:
    n = rng.randint(1, 80)
    labels = ["Positive", "Neutral", "Negative"]
    gt = [{"id": str(i), "label": rng.choice(labels)} for i in range(n)]
    predicted = []
    for row in gt:
        roll = rng.random()
        if roll < 0.15:
            continue  # missing prediction
        label = row["label"]
        if roll < 0.35:
            label = label.lower()  # case flip counts as wrong
        elif roll < 0.5:
            label = rng.choice(labels)
        elif roll < 0.6:
            label = " " + label + "  "  # trim-equivalent
        predicted.append({"id": row["id"], "label": label})
    return gt, predicted
