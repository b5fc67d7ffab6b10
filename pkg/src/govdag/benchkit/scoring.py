"""Resolve evaluator bindings and score task outputs, including the
stage-wise weighted scoring of DAG-level tasks."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from govdag.benchkit.compose import dag_score, dag_weights
from govdag.benchkit.evaluators import (
    EvalOutcome,
    eval_classification,
    eval_dedup,
    eval_filtering,
    eval_imputation,
    eval_integration,
    eval_refinement,
)
from govdag.core.manifest import TaskPack
from govdag.core.tabular import read_rows
from govdag.core.types import EvaluatorBinding, EvaluatorKind, TaskLevel, TaskSpec
from govdag.errors import DataFileError, EvaluatorError

DEFAULT_ATOL = 1e-6


def score_with_binding(
    binding: EvaluatorBinding,
    gt_path: Path,
    output_path: Path,
    raw_path: Path | None = None,
    task_dir: Path | None = None,
) -> EvalOutcome:
    """Score one produced file against ground truth under a binding."""
    if not Path(output_path).is_file():
        return EvalOutcome(0.0, f"output file missing: {output_path}")
    params = binding.params
    id_field = params.get("id_field", "id")
    try:
        if binding.kind is EvaluatorKind.SCRIPT:
            return _score_with_script(binding, gt_path, output_path, raw_path, task_dir)
        gt_header, gt_rows = read_rows(gt_path)
        out_header, out_rows = read_rows(output_path)
    except DataFileError as exc:
        return EvalOutcome(0.0, str(exc))

    if binding.kind is EvaluatorKind.BUILTIN_FILTERING:
        return eval_filtering(gt_rows, out_rows, id_field=id_field)
    if binding.kind is EvaluatorKind.BUILTIN_REFINEMENT:
        return eval_refinement(
            gt_rows, out_rows, id_field=id_field, text_field=params.get("text_field", "text")
        )
    if binding.kind is EvaluatorKind.BUILTIN_IMPUTATION:
        if raw_path is None:
            raise EvaluatorError("imputation evaluator needs the raw input file")
        try:
            raw_header, raw_rows = read_rows(raw_path)
        except DataFileError as exc:
            return EvalOutcome(0.0, str(exc))
        return eval_imputation(
            (out_header, out_rows),
            (gt_header, gt_rows),
            (raw_header, raw_rows),
            atol=float(params.get("atol", DEFAULT_ATOL)),
        )
    if binding.kind is EvaluatorKind.BUILTIN_DEDUP:
        return eval_dedup(gt_rows, out_rows, id_field=id_field)
    if binding.kind is EvaluatorKind.BUILTIN_INTEGRATION:
        return eval_integration(gt_header, gt_rows, out_rows)
    if binding.kind is EvaluatorKind.BUILTIN_CLASSIFICATION:
        return eval_classification(
            gt_rows, out_rows, id_field=id_field, label_field=params.get("label_field", "label")
        )
    raise EvaluatorError(f"unhandled evaluator kind {binding.kind}")


def _score_with_script(
    binding: EvaluatorBinding,
    gt_path: Path,
    output_path: Path,
    raw_path: Path | None,
    task_dir: Path | None,
) -> EvalOutcome:
    # Imported here: scoring is otherwise sandbox-free and the sandbox
    # package is only needed for script-kind bindings.
    from govdag.executor.codegen import CodeArtifact
    from govdag.sandbox.runner import SandboxLimits, run_sandboxed

    if task_dir is None:
        raise EvaluatorError("script evaluator needs the task directory")
    script_path = Path(task_dir) / str(binding.script_ref)
    if not script_path.is_file():
        raise EvaluatorError(f"evaluator script missing: {script_path}")

    staged = [Path(gt_path), Path(output_path)]
    job = {
        "expected": f"inputs/{_staged_name('expected', gt_path)}",
        "processed": f"inputs/{_staged_name('processed', output_path)}",
        "params": dict(binding.params),
    }
    if raw_path is not None:
        staged.append(Path(raw_path))
        job["raw"] = f"inputs/{_staged_name('raw', raw_path)}"
    artifact = CodeArtifact(
        node_id="evaluator",
        source=script_path.read_text(encoding="utf-8"),
        language_tag="python",
        provenance="free",
    )
    outcome = run_sandboxed(
        artifact,
        staged,
        SandboxLimits(wall_clock_s=60.0),
        job=job,
        staged_names=[job["expected"], job["processed"]] + ([job["raw"]] if raw_path else []),
    )
    if outcome.status != "ok":
        raise EvaluatorError(f"evaluator script failed ({outcome.status}): {outcome.stderr[:500]}")
    score = _parse_eval_score(outcome.stdout)
    if score is None:
        raise EvaluatorError("evaluator script printed no eval_score")
    return EvalOutcome(min(1.0, max(0.0, score)))


def _staged_name(role: str, path: Path | str) -> str:
    return f"{role}{Path(path).suffix}"


def _parse_eval_score(stdout: str) -> float | None:
    for line in reversed(stdout.splitlines()):
        line = line.strip().replace("'", '"')
        if not line.startswith("{"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            continue
        if "eval_score" in obj:
            try:
                return float(obj["eval_score"])
            except (TypeError, ValueError):
                return None
    return None


def subtasks_of(pack: TaskPack, task: TaskSpec) -> list[TaskSpec]:
    if task.dag_composition is None:
        raise EvaluatorError(f"task '{task.id}' has no dag composition")
    return [pack.task(step.subtask_id) for step in task.dag_composition]


def stage_gt_path(pack: TaskPack, task: TaskSpec, stage: int) -> Path:
    """Ground truth for stage ``stage`` (1-based); the final stage is the
    task's own ground truth, earlier stages live at data/stage_<k>.*."""
    assert task.dag_composition is not None
    n = len(task.dag_composition)
    if stage == n:
        return pack.data_path(task, task.ground_truth)
    matches = sorted(pack.data_path(task, f"data/stage_{stage}").parent.glob(f"stage_{stage}.*"))
    if len(matches) != 1:
        raise EvaluatorError(f"task '{task.id}': expected one data/stage_{stage}.* file, found {len(matches)}")
    return matches[0]


def stage_raw_path(pack: TaskPack, task: TaskSpec, stage: int) -> Path:
    """What stage ``stage`` consumed: the previous stage's ground truth, or
    the task input for the first stage."""
    if stage == 1:
        return pack.data_path(task, task.inputs[0])
    return stage_gt_path(pack, task, stage - 1)


def score_dag_outputs(
    pack: TaskPack,
    task: TaskSpec,
    stage_outputs: Sequence[Path | None],
) -> tuple[float, list[EvalOutcome]]:
    """Score each pipeline stage with its seed subtask's evaluator, then
    combine with difficulty weights."""
    assert task.dag_composition is not None
    subtasks = subtasks_of(pack, task)
    weights = dag_weights([step.frozen_score for step in task.dag_composition], pack.alpha)
    outcomes: list[EvalOutcome] = []
    for idx, subtask in enumerate(subtasks, start=1):
        output = stage_outputs[idx - 1] if idx - 1 < len(stage_outputs) else None
        if output is None:
            outcomes.append(EvalOutcome(0.0, f"stage {idx} produced no output"))
            continue
        outcomes.append(
            score_with_binding(
                subtask.evaluator,
                gt_path=stage_gt_path(pack, task, idx),
                output_path=Path(output),
                raw_path=stage_raw_path(pack, task, idx),
                task_dir=pack.data_path(task, "."),
            )
        )
    combined = dag_score(weights, [o.score for o in outcomes])
    return combined, outcomes


def score_operator_output(pack: TaskPack, task: TaskSpec, output_path: Path) -> EvalOutcome:
    return score_with_binding(
        task.evaluator,
        gt_path=pack.data_path(task, task.ground_truth),
        output_path=Path(output_path),
        raw_path=pack.data_path(task, task.inputs[0]),
        task_dir=pack.data_path(task, "."),
    )


def is_dag_task(task: TaskSpec) -> bool:
    return task.level is TaskLevel.DAG
