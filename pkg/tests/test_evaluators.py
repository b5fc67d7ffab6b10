from __future__ import annotations

import random

import pytest

from govdag.benchkit.evaluators import (
    eval_classification,
    eval_dedup,
    eval_filtering,
    eval_imputation,
    eval_integration,
    eval_refinement,
)
from instance_gen import dedup_instance, filtering_instance
from oracles import brute_dedup, brute_filtering

IDS = lambda *values: [{"id": v} for v in values]  # noqa: E731


# -- filtering --


def test_filtering_worked_example():
    # E={0,1,2}, P={0,1}: precision 1.0, recall 2/3, F1 0.8
    outcome = eval_filtering(IDS(0, 1, 2), IDS(0, 1))
    assert outcome.score == pytest.approx(0.8)


def test_filtering_exact_match_and_empty():
    assert eval_filtering(IDS(1, 2), IDS(1, 2)).score == 1.0
    assert eval_filtering(IDS(1, 2), []).score == 0.0
    assert eval_filtering([], []).score == 0.0


def test_filtering_small_oracle_agreement():
    rng = random.Random(7)
    for _ in range(100):
        expected, processed = filtering_instance(rng)
        assert eval_filtering(expected, processed).score == pytest.approx(
            brute_filtering(expected, processed)
        )


# -- refinement --


def _texts(pairs):
    return [{"id": i, "text": t} for i, t in pairs]


def test_refinement_identical_is_one():
    rows = _texts([(1, "a b"), (2, "c d")])
    assert eval_refinement(rows, rows).score == 1.0


def test_refinement_one_of_four_differs():
    expected = _texts([(1, "a"), (2, "b"), (3, "c"), (4, "d")])
    processed = _texts([(1, "a"), (2, "b"), (3, "c"), (4, "X")])
    assert eval_refinement(expected, processed).score == pytest.approx(0.75)


def test_refinement_missing_half_bounded():
    expected = _texts([(i, f"t{i}") for i in range(4)])
    processed = _texts([(0, "t0"), (1, "t1")])
    assert eval_refinement(expected, processed).score <= 0.5


def test_refinement_whitespace_normalized():
    expected = _texts([(1, "hello world")])
    processed = _texts([(1, "  hello   world ")])
    assert eval_refinement(expected, processed).score == 1.0


# -- imputation --


def _tables():
    header = ["id", "age"]
    raw = [{"id": "1", "age": ""}, {"id": "2", "age": "30"}]
    gt = [{"id": "1", "age": "25.0"}, {"id": "2", "age": "30"}]
    return header, raw, gt


def test_imputation_gt_against_itself_with_mask():
    header, raw, gt = _tables()
    assert eval_imputation((header, gt), (header, gt), (header, raw)).score == 1.0


def test_imputation_off_by_twice_atol_fails():
    header, raw, gt = _tables()
    candidate = [{"id": "1", "age": "25.002"}, {"id": "2", "age": "30"}]
    outcome = eval_imputation((header, candidate), (header, gt), (header, raw), atol=1e-3)
    assert outcome.score == 0.0
    assert "does not match the reference" in outcome.reason


def test_imputation_modified_original_fails():
    header, raw, gt = _tables()
    candidate = [{"id": "1", "age": "25.0"}, {"id": "2", "age": "31"}]
    outcome = eval_imputation((header, candidate), (header, gt), (header, raw))
    assert outcome.score == 0.0
    assert "originally complete" in outcome.reason


def test_imputation_unfilled_and_shape_mismatch():
    header, raw, gt = _tables()
    outcome = eval_imputation((header, raw), (header, gt), (header, raw))
    assert outcome.score == 0.0
    assert "not filled" in outcome.reason
    outcome = eval_imputation((header, gt[:1]), (header, gt), (header, raw))
    assert "dimension mismatch" in outcome.reason
    reordered = ["age", "id"]
    outcome = eval_imputation((reordered, gt), (header, gt), (header, raw))
    assert outcome.score == 0.0


# -- dedup --


def _gt_rows():
    return [
        {"id": "a", "name": "x"},
        {"id": "b", "name": "y"},
        {"id": "c", "name": "z"},
    ]


def test_dedup_exact_match():
    assert eval_dedup(_gt_rows(), _gt_rows()).score == 1.0


def test_dedup_one_extra_duplicate():
    gt = _gt_rows()
    predicted = gt + [dict(gt[0])]
    outcome = eval_dedup(gt, predicted)
    precision = 3 / 4
    assert outcome.score == pytest.approx(2 * precision / (precision + 1))


def test_dedup_empty_predictions():
    assert eval_dedup(_gt_rows(), []).score == 0.0


def test_dedup_first_occurrence_wins():
    gt = _gt_rows()
    broken_first = [dict(gt[0], name="WRONG")] + gt
    outcome = eval_dedup(gt, broken_first)
    # mismatch counts FP, later exact row still a TP
    assert 0 < outcome.score < 1


def test_dedup_gt_order_irrelevant():
    rng = random.Random(3)
    for _ in range(50):
        gt, predicted = dedup_instance(rng)
        shuffled = list(gt)
        rng.shuffle(shuffled)
        assert eval_dedup(gt, predicted).score == eval_dedup(shuffled, predicted).score


def test_dedup_small_oracle_agreement():
    rng = random.Random(11)
    for _ in range(100):
        gt, predicted = dedup_instance(rng)
        assert eval_dedup(gt, predicted).score == pytest.approx(brute_dedup(gt, predicted))


# -- integration --


def test_integration_self_and_mutation():
    header = ["a", "b"]
    rows = [{"a": "1", "b": "2"}, {"a": "1", "b": "2"}, {"a": "3", "b": "4"}]
    assert eval_integration(header, rows, rows).score == 1.0
    changed = [dict(r) for r in rows]
    changed[0]["b"] = "9"
    assert eval_integration(header, rows, changed).score == 0.0


def test_integration_extra_column_ignored():
    header = ["a"]
    rows = [{"a": "1"}, {"a": "2"}]
    predicted = [{"a": "2", "junk": "x"}, {"a": "1", "junk": "y"}]
    assert eval_integration(header, rows, predicted).score == 1.0


def test_integration_empty_and_missing_column():
    header = ["a", "b"]
    rows = [{"a": "1", "b": "2"}]
    assert eval_integration(header, rows, []).score == 0.0
    outcome = eval_integration(header, rows, [{"a": "1"}])
    assert outcome.score == 0.0
    assert "missing columns" in outcome.reason


# -- classification --


def _labeled(pairs, label_field="label"):
    return [{"id": i, label_field: l} for i, l in pairs]


def test_classification_all_equal():
    rows = _labeled([(i, "Positive") for i in range(5)])
    assert eval_classification(rows, rows).score == 1.0


def test_classification_case_sensitive():
    gt = _labeled([(i, "Positive") for i in range(10)])
    predicted = _labeled([(0, "positive")] + [(i, "Positive") for i in range(1, 10)])
    assert eval_classification(gt, predicted).score == pytest.approx(0.9)


def test_classification_trims_ends():
    gt = _labeled([(1, "Neutral")])
    predicted = _labeled([(1, "  Neutral ")])
    assert eval_classification(gt, predicted).score == 1.0


def test_classification_empty_gt_is_zero():
    assert eval_classification([], _labeled([(1, "x")])).score == 0.0


def test_every_builtin_scores_one_on_gt_vs_gt(sample_pack):
    from govdag.benchkit.scoring import score_with_binding

    for task in sample_pack.tasks:
        if task.dag_composition is not None:
            continue
        gt = sample_pack.data_path(task, task.ground_truth)
        raw = sample_pack.data_path(task, task.inputs[0])
        outcome = score_with_binding(task.evaluator, gt, gt, raw_path=raw)
        assert outcome.score == 1.0, (task.id, outcome.reason)
