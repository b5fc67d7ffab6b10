"""The benchmark's consistency gate: ground truth must score 1.0 under the
task evaluator while the noisy input scores below 0.3."""

from __future__ import annotations

from dataclasses import dataclass

from govdag.benchkit.compose import dag_score, dag_weights
from govdag.benchkit.evaluators import EvalOutcome
from govdag.benchkit.scoring import (
    score_with_binding,
    stage_gt_path,
    stage_raw_path,
    subtasks_of,
)
from govdag.core.manifest import TaskPack
from govdag.core.types import TaskLevel, TaskSpec

GT_TOLERANCE = 1e-9
NOISY_CEILING = 0.3


@dataclass(frozen=True)
class ConsistencyResult:
    task_id: str
    gt_score: float
    noisy_score: float
    passed: bool
    gt_reason: str | None = None
    noisy_reason: str | None = None


def consistency_check(pack: TaskPack, task: TaskSpec) -> ConsistencyResult:
    """Evaluate the task's own ground truth and its noisy input under the
    task evaluator; the gate passes iff gt >= 1.0 and noisy < 0.3."""
    if task.level is TaskLevel.DAG:
        gt, noisy = _check_dag(pack, task)
    else:
        gt, noisy = _check_operator(pack, task)
    passed = gt.score >= 1.0 - GT_TOLERANCE and noisy.score < NOISY_CEILING
    return ConsistencyResult(
        task_id=task.id,
        gt_score=gt.score,
        noisy_score=noisy.score,
        passed=passed,
        gt_reason=gt.reason,
        noisy_reason=noisy.reason,
    )


def _check_operator(pack: TaskPack, task: TaskSpec) -> tuple[EvalOutcome, EvalOutcome]:
    gt_path = pack.data_path(task, task.ground_truth)
    noisy_path = pack.data_path(task, task.inputs[0])
    task_dir = pack.data_path(task, ".")
    gt = score_with_binding(task.evaluator, gt_path, gt_path, raw_path=noisy_path, task_dir=task_dir)
    noisy = score_with_binding(task.evaluator, gt_path, noisy_path, raw_path=noisy_path, task_dir=task_dir)
    return gt, noisy


def _check_dag(pack: TaskPack, task: TaskSpec) -> tuple[EvalOutcome, EvalOutcome]:
    assert task.dag_composition is not None
    subtasks = subtasks_of(pack, task)
    weights = dag_weights([s.frozen_score for s in task.dag_composition], pack.alpha)
    noisy_path = pack.data_path(task, task.inputs[0])
    task_dir = pack.data_path(task, ".")
    gt_scores = []
    noisy_scores = []
    for idx, subtask in enumerate(subtasks, start=1):
        stage_gt = stage_gt_path(pack, task, idx)
        stage_raw = stage_raw_path(pack, task, idx)
        gt_scores.append(
            score_with_binding(subtask.evaluator, stage_gt, stage_gt, raw_path=stage_raw, task_dir=task_dir)
        )
        noisy_scores.append(
            score_with_binding(subtask.evaluator, stage_gt, noisy_path, raw_path=stage_raw, task_dir=task_dir)
        )
    gt = EvalOutcome(dag_score(weights, [o.score for o in gt_scores]))
    noisy = EvalOutcome(dag_score(weights, [o.score for o in noisy_scores]))
    return gt, noisy
