from __future__ import annotations

import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from govdag.benchkit.compose import combine_objectives, compose_dag_task, dag_score, dag_weights
from govdag.benchkit.consistency import consistency_check
from govdag.benchkit.noise import NoiseRecipe, build_noise_recipe, reverse_objective, synthesize_noise
from govdag.benchkit.scoring import score_with_binding
from govdag.core.tabular import read_rows
from govdag.core.types import EvaluatorBinding, EvaluatorKind, TaskLevel
from govdag.errors import EvaluatorError, ManifestError
from govdag.executor.codegen import CodeArtifact
from govdag.gateway.scripted import scripted_backend
from govdag.sandbox.runner import SandboxLimits

# -- dag weights / score --


def test_alpha_zero_gives_uniform_weights():
    weights = dag_weights([0.1, 0.9, 0.4], alpha=0.0)
    assert weights == [pytest.approx(1 / 3)] * 3


def test_worked_example_weights():
    weights = dag_weights([0.0, 1.0], alpha=1.0)
    assert weights == [pytest.approx(2 / 3), pytest.approx(1 / 3)]


def test_single_score_weight_is_one():
    assert dag_weights([0.7], alpha=2.0) == [pytest.approx(1.0)]


def test_weights_validate_inputs():
    with pytest.raises(ValueError):
        dag_weights([0.5], alpha=-1)
    with pytest.raises(ValueError):
        dag_weights([], alpha=1)
    with pytest.raises(ValueError):
        dag_weights([1.5], alpha=1)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=8), st.floats(0.01, 5))
def test_weights_strictly_decreasing_in_score(scores, alpha):
    weights = dag_weights(scores, alpha)
    assert sum(weights) == pytest.approx(1.0)
    for i in range(len(scores)):
        for j in range(len(scores)):
            # scores separated by more than float noise weigh strictly less
            if scores[i] + 1e-9 < scores[j]:
                assert weights[i] > weights[j]


def test_dag_score_examples():
    assert dag_score([1 / 3, 1 / 3, 1 / 3], [1, 1, 1]) == pytest.approx(1.0)
    assert dag_score([2 / 3, 1 / 3], [0.9, 0.6]) == pytest.approx(0.8)
    assert dag_score([0.5, 0.5], [0, 0]) == 0.0


def test_dag_score_validations():
    with pytest.raises(ValueError):
        dag_score([0.5], [1, 1])
    with pytest.raises(ValueError):
        dag_score([0.7, 0.7], [1, 1])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=8))
def test_dag_score_within_score_bounds(pairs):
    frozen = [p[0] for p in pairs]
    scores = [p[1] for p in pairs]
    combined = dag_score(dag_weights(frozen, 1.0), scores)
    assert min(scores) - 1e-9 <= combined <= max(scores) + 1e-9


# -- composition --


def test_compose_builds_three_step_manifest(sample_pack):
    task = compose_dag_task(
        ["filter-blocked-words", "strip-html", "dedup-exact"], sample_pack, 1.0, task_id="x"
    )
    assert task.level is TaskLevel.DAG
    assert [s.subtask_id for s in task.dag_composition] == [
        "filter-blocked-words", "strip-html", "dedup-exact",
    ]
    assert task.dag_composition[0].frozen_score == sample_pack.frozen_scores["filter-blocked-words"]
    assert "Step 1:" in task.objective and "Step 3:" in task.objective


def test_compose_rejects_two_seeds(sample_pack):
    with pytest.raises(ManifestError, match="more than 2"):
        compose_dag_task(["filter-blocked-words", "strip-html"], sample_pack, 1.0)


def test_compose_rejects_back_to_back_repeat(sample_pack):
    with pytest.raises(ManifestError, match="back-to-back"):
        compose_dag_task(
            ["filter-blocked-words", "filter-blocked-words", "strip-html"], sample_pack, 1.0
        )


def test_compose_warns_on_consecutive_same_category(sample_pack, caplog):
    with caplog.at_level(logging.WARNING):
        task = compose_dag_task(
            ["filter-blocked-words", "filter-symbol-noise", "dedup-exact"], sample_pack, 1.0
        )
    assert task is not None  # warning only, not a rejection
    assert any("consecutive" in r.message for r in caplog.records)


def test_compose_unknown_seed(sample_pack):
    with pytest.raises(ManifestError, match="unknown seed"):
        compose_dag_task(["nope", "strip-html", "dedup-exact"], sample_pack, 1.0)


def test_combine_objectives_enumerates_steps():
    text = combine_objectives(["do a", "do b", "do c"])
    assert text.index("Step 1: do a") < text.index("Step 2: do b") < text.index("Step 3: do c")


# -- consistency gate --


def test_bundled_operator_tasks_pass_gate(sample_pack):
    for task in sample_pack.tasks:
        if task.level is not TaskLevel.OPERATOR:
            continue
        result = consistency_check(sample_pack, task)
        assert result.passed, (task.id, result)
        assert result.gt_score == pytest.approx(1.0)
        assert result.noisy_score < 0.3


def test_bundled_dag_tasks_pass_gate(sample_pack):
    for task in sample_pack.tasks:
        if task.level is TaskLevel.DAG:
            result = consistency_check(sample_pack, task)
            assert result.passed, (task.id, result)


def test_script_binding_missing_asset_is_error(sample_pack, tmp_path):
    binding = EvaluatorBinding(kind=EvaluatorKind.SCRIPT, script_ref="eval/missing.py")
    task = sample_pack.task("filter-blocked-words")
    gt = sample_pack.data_path(task, task.ground_truth)
    with pytest.raises(EvaluatorError, match="missing"):
        score_with_binding(binding, gt, gt, task_dir=tmp_path)


def test_script_binding_runs_eval_script(sample_pack, tmp_path):
    from govdag.gateway.scripted import _EVAL_SCRIPT

    (tmp_path / "eval.py").write_text(_EVAL_SCRIPT, encoding="utf-8")
    binding = EvaluatorBinding(kind=EvaluatorKind.SCRIPT, script_ref="eval.py")
    task = sample_pack.task("filter-blocked-words")
    gt = sample_pack.data_path(task, task.ground_truth)
    noisy = sample_pack.data_path(task, task.inputs[0])
    assert score_with_binding(binding, gt, gt, task_dir=tmp_path).score == 1.0
    assert score_with_binding(binding, gt, noisy, task_dir=tmp_path).score < 0.3


# -- noise synthesis --


def test_reverse_objective_classification_mentions_label_corruption(sample_pack):
    task = sample_pack.task("label-sentiment")
    text = reverse_objective(task, [{"text_id": "1", "content": "x"}], scripted_backend())
    assert "mislabeling" in text
    assert "irrelevant features" in text


def test_reverse_objective_filtering_mentions_inserted_rows(sample_pack):
    task = sample_pack.task("filter-blocked-words")
    text = reverse_objective(task, [{"id": 1, "text": "x"}], scripted_backend())
    assert "insert" in text.lower()
    assert "blocked" in text.lower()


def test_reverse_objective_rejects_empty_objective(sample_pack):
    task = sample_pack.task("filter-blocked-words")
    stripped = type(task)(**{**task.__dict__, "objective": " "})
    with pytest.raises(ValueError, match="empty objective"):
        reverse_objective(stripped, [{"id": 1}], scripted_backend())


def test_synthesize_noise_dedup_grows_row_count(sample_pack, tmp_path):
    task = sample_pack.task("dedup-exact")
    gt = sample_pack.data_path(task, task.ground_truth)
    samples = [{"id": "u01", "name": "Alice", "city": "Lisbon"}]
    recipe = build_noise_recipe(task, samples, scripted_backend())
    outcome, noisy = synthesize_noise(recipe, gt, tmp_path / "noisy.jsonl")
    assert outcome.ok and noisy is not None
    _, gt_rows = read_rows(gt)
    _, noisy_rows = read_rows(noisy)
    assert len(noisy_rows) > len(gt_rows)
    assert gt.read_bytes() == sample_pack.data_path(task, task.ground_truth).read_bytes()


def test_identity_noise_fails_gate_downstream(sample_pack, tmp_path):
    from govdag.benchkit.evaluators import eval_filtering

    task = sample_pack.task("filter-blocked-words")
    gt = sample_pack.data_path(task, task.ground_truth)
    recipe = NoiseRecipe(
        reversed_objective="Copy the data unchanged; no disruption is introduced.",
        noise_code=CodeArtifact(node_id="noise", source=_copy_source()),
    )
    outcome, noisy = synthesize_noise(recipe, gt, tmp_path / "noisy.jsonl")
    assert outcome.ok
    _, gt_rows = read_rows(gt)
    _, noisy_rows = read_rows(noisy)
    assert eval_filtering(gt_rows, noisy_rows).score >= 0.3  # gate would reject


def _copy_source() -> str:
    return (
        "import json, shutil\nfrom pathlib import Path\n"
        'job = json.loads(Path("job.json").read_text())\n'
        'shutil.copyfile(job["inputs"][0], job["output"])\n'
    )


def test_noise_timeout_surfaced_not_raised(sample_pack, tmp_path):
    task = sample_pack.task("filter-blocked-words")
    gt = sample_pack.data_path(task, task.ground_truth)
    recipe = NoiseRecipe(
        reversed_objective="spin forever",
        noise_code=CodeArtifact(node_id="noise", source="while True:\n    pass\n"),
    )
    outcome, noisy = synthesize_noise(recipe, gt, tmp_path / "n.jsonl", SandboxLimits(wall_clock_s=2.0))
    assert outcome.status == "timeout"
    assert noisy is None
