"""DAG-level task composition and difficulty-weighted scoring."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

from govdag.core.manifest import TaskPack
from govdag.core.types import DagStep, TaskLevel, TaskSpec
from govdag.errors import ManifestError

log = logging.getLogger(__name__)


def dag_weights(frozen_scores: Sequence[float], alpha: float) -> list[float]:
    """Difficulty weights w_i = 1/(1 + alpha * score_i), normalized to sum 1.

    The raw weights are normalized so that a pipeline scoring full marks on
    every subtask lands exactly at 1.0, which the consistency gate requires.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if not frozen_scores:
        raise ValueError("at least one score required")
    for score in frozen_scores:
        if not 0.0 <= score <= 1.0:
            raise ValueError(f"score {score} outside [0, 1]")
    raw = [1.0 / (1.0 + alpha * score) for score in frozen_scores]
    total = sum(raw)
    return [w / total for w in raw]


def dag_score(weights: Sequence[float], subtask_scores: Sequence[float]) -> float:
    """Weighted DAG-level score, clamped to [0, 1]."""
    if len(weights) != len(subtask_scores):
        raise ValueError("weights and scores must have equal length")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1")
    total = sum(w * s for w, s in zip(weights, subtask_scores))
    return min(1.0, max(0.0, total))


def combine_objectives(objectives: Sequence[str]) -> str:
    steps = "\n".join(f"Step {i}: {obj.strip()}" for i, obj in enumerate(objectives, start=1))
    return "Execute the following operations in sequence on the input data.\n" + steps


def compose_dag_task(
    seeds: Sequence[str],
    pack: TaskPack,
    alpha: float,
    task_id: str | None = None,
) -> TaskSpec:
    """Build a DAG-level TaskSpec from an ordered list of operator-level
    seed task ids.

    Sequences must be longer than 2 and may not repeat a subtask
    back-to-back; consecutive same-category steps are allowed but logged
    as a warning (whether the chain is *logical* stays a human judgement).
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if len(seeds) <= 2:
        raise ManifestError(f"dag composition needs more than 2 subtasks, got {len(seeds)}")
    for first, second in zip(seeds, seeds[1:]):
        if first == second:
            raise ManifestError(f"subtask '{first}' repeated back-to-back")

    subtasks = []
    for seed in seeds:
        try:
            subtasks.append(pack.task(seed))
        except KeyError:
            raise ManifestError(f"unknown seed task '{seed}' in pack '{pack.pack_id}'") from None

    for first, second in zip(subtasks, subtasks[1:]):
        if first.category == second.category:
            log.warning(
                "dag composition chains two consecutive %s steps (%s -> %s); check the sequence is logical",
                first.category.value,
                first.id,
                second.id,
            )

    composition = []
    for seed in seeds:
        if seed not in pack.frozen_scores:
            raise ManifestError(f"no frozen score for seed '{seed}' in pack.toml")
        composition.append(DagStep(subtask_id=seed, frozen_score=pack.frozen_scores[seed]))

    # Linear chains preserve the data format, so the composed task's files
    # take the first seed's input format.
    input_ext = Path(subtasks[0].inputs[0]).suffix
    return TaskSpec(
        id=task_id or "dag-" + "-".join(seeds),
        level=TaskLevel.DAG,
        category=subtasks[-1].category,
        objective=combine_objectives([t.objective for t in subtasks]),
        inputs=(f"data/noisy{input_ext}",),
        ground_truth=f"data/gt{input_ext}",
        evaluator=subtasks[-1].evaluator,
        dag_composition=tuple(composition),
    )
