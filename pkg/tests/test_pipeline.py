from __future__ import annotations

import pytest

from govdag.core.types import TaskLevel
from govdag.errors import ConfigError
from govdag.gateway.replay import RecordingBackend
from govdag.gateway.scripted import scripted_backend
from govdag.pipeline import MeteringBackend, RunConfig, plan_task, render_dag, run_task

FAST = dict(max_iter=5)


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(backend="quantum")
    with pytest.raises(ConfigError):
        RunConfig(backend="replay")  # transcript required
    with pytest.raises(ConfigError):
        RunConfig(parallelism=0)
    with pytest.raises(ConfigError):
        RunConfig(ablation="no_everything")


def test_metering_backend_accounts_calls():
    meter = MeteringBackend(scripted_backend())
    meter.complete("# grounding prompt v1\nInstruction:\nx\n\nData schema: jsonl [id: integer]\n")
    assert meter.calls == 1
    assert meter.tokens > 0


def test_plan_task_produces_contracted_chain(sample_pack):
    config = RunConfig(backend="mock", **FAST)
    task = sample_pack.task("standardize-dates")
    dag, violations, intent = plan_task(sample_pack, task, scripted_backend(), config)
    assert intent.feasible
    assert violations == []
    assert [n.abstract_op for n in dag.nodes] == ["Standardize Date Format"]
    assert dag.nodes[0].contract.post  # value_format guarantee present


def test_plan_task_refuses_no_planner(sample_pack):
    config = RunConfig(backend="mock", ablation="no_planner", **FAST)
    with pytest.raises(ConfigError, match="no_planner"):
        plan_task(sample_pack, sample_pack.task("strip-html"), scripted_backend(), config)


def test_run_task_operator_level(sample_pack, seed_library, tmp_path):
    config = RunConfig(backend="mock", **FAST)
    detail = run_task(
        sample_pack, sample_pack.task("strip-html"), seed_library, scripted_backend(), config, tmp_path
    )
    assert detail.record.success
    assert detail.record.score == 1.0
    assert detail.record.debug_iterations == 1


def test_run_task_dag_level_counts_stage_iterations(sample_pack, seed_library, tmp_path):
    config = RunConfig(backend="mock", **FAST)
    detail = run_task(
        sample_pack, sample_pack.task("dag-clean-text"), seed_library, scripted_backend(), config, tmp_path
    )
    assert detail.record.success
    # three stages, all first-try: D sums the per-node cycles
    assert detail.record.debug_iterations == 3
    assert len(detail.stage_outputs) == 3


def test_run_task_feedback_loop_paths(sample_pack, seed_library, tmp_path):
    config = RunConfig(backend="mock", **FAST)
    # crash-then-fix path
    crash = run_task(
        sample_pack, sample_pack.task("filter-symbol-noise"), seed_library, scripted_backend(), config,
        tmp_path / "a",
    )
    assert crash.record.success and crash.record.debug_iterations == 2
    # contract-violation-then-fix path (first draft leaves nulls in place)
    contract = run_task(
        sample_pack, sample_pack.task("impute-mean"), seed_library, scripted_backend(), config,
        tmp_path / "b",
    )
    assert contract.record.success and contract.record.debug_iterations == 2


def test_no_planner_issues_exactly_one_generation(sample_pack, seed_library, tmp_path):
    config = RunConfig(backend="mock", ablation="no_planner", **FAST)
    detail = run_task(
        sample_pack, sample_pack.task("strip-html"), seed_library, scripted_backend(), config, tmp_path
    )
    assert detail.calls == 1  # no grounding, no contracts, one codegen
    assert detail.record.debug_iterations == 1
    assert detail.dag is not None and len(detail.dag.nodes) == 1


def test_no_rag_prompts_carry_zero_exemplar_blocks(sample_pack, seed_library, tmp_path):
    recorder = RecordingBackend(scripted_backend())
    config = RunConfig(backend="mock", ablation="no_rag", **FAST)
    detail = run_task(
        sample_pack, sample_pack.task("strip-html"), seed_library, recorder, config, tmp_path
    )
    assert detail.record.success
    codegen_prompts = [t.prompt for t in recorder.turns if t.prompt.startswith("# codegen prompt")]
    assert codegen_prompts
    for prompt in codegen_prompts:
        assert "Reference operators" not in prompt


def test_rag_prompts_carry_exemplar_blocks(sample_pack, seed_library, tmp_path):
    recorder = RecordingBackend(scripted_backend())
    config = RunConfig(backend="mock", k=4, **FAST)
    run_task(sample_pack, sample_pack.task("strip-html"), seed_library, recorder, config, tmp_path)
    codegen_prompts = [t.prompt for t in recorder.turns if t.prompt.startswith("# codegen prompt")]
    assert all(p.count("### ") == 4 for p in codegen_prompts)


def test_render_dag_is_stable(sample_pack, seed_library):
    config = RunConfig(backend="mock", **FAST)
    task = sample_pack.task("standardize-dates")
    dag, violations, _ = plan_task(sample_pack, task, scripted_backend(), config)
    first = render_dag(dag, violations)
    second = render_dag(dag, violations)
    assert first == second
    assert "Standardize Date Format" in first


def test_all_dag_tasks_succeed(sample_pack, seed_library, tmp_path):
    config = RunConfig(backend="mock", **FAST)
    for task in sample_pack.tasks:
        if task.level is TaskLevel.DAG:
            detail = run_task(sample_pack, task, seed_library, scripted_backend(), config, tmp_path / task.id)
            assert detail.record.success, (task.id, detail.error)
