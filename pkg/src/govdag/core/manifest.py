"""Task manifests and task-pack loading.

Pack layout on disk::

    <pack>/pack.toml              pack id, alpha, frozen reference scores
    <pack>/tasks/<id>/manifest    one JSON manifest per task
    <pack>/tasks/<id>/data/...    gt / noisy data files referenced by the manifest
    <pack>/tasks/<id>/eval_script optional, for kind=script evaluators
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from govdag.core.types import (
    DagStep,
    EvaluatorBinding,
    TaskCategory,
    TaskLevel,
    TaskSpec,
)
from govdag.errors import ManifestError

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - version specific
    import tomli as tomllib

MANIFEST_NAMES = ("manifest", "manifest.json")


def parse_manifest(obj: Mapping[str, Any], path: str | None = None) -> TaskSpec:
    def need(name: str) -> Any:
        if name not in obj:
            raise ManifestError("missing required field", path=path, field=name)
        return obj[name]

    try:
        level = TaskLevel(need("level"))
    except ValueError as exc:
        raise ManifestError(str(exc), path=path, field="level") from exc
    try:
        category = TaskCategory(need("category"))
    except ValueError as exc:
        raise ManifestError(str(exc), path=path, field="category") from exc

    raw_inputs = need("inputs")
    if not isinstance(raw_inputs, list) or not all(isinstance(i, str) for i in raw_inputs):
        raise ManifestError("inputs must be a list of file references", path=path, field="inputs")

    try:
        evaluator = EvaluatorBinding.from_obj(need("evaluator"))
    except (KeyError, ValueError) as exc:
        raise ManifestError(str(exc), path=path, field="evaluator") from exc

    composition = None
    if obj.get("dag_composition") is not None:
        steps = []
        for entry in obj["dag_composition"]:
            try:
                steps.append(DagStep(subtask_id=entry["subtask"], frozen_score=float(entry["frozen_score"])))
            except (KeyError, TypeError, ValueError) as exc:
                raise ManifestError(str(exc), path=path, field="dag_composition") from exc
        composition = tuple(steps)

    try:
        return TaskSpec(
            id=str(need("id")),
            level=level,
            category=category,
            objective=str(need("objective")),
            inputs=tuple(raw_inputs),
            ground_truth=str(need("ground_truth")),
            evaluator=evaluator,
            dag_composition=composition,
            encoding=str(obj.get("encoding", "utf-8")),
        )
    except ManifestError as exc:
        if exc.path is None:
            exc.path = path
        raise


def serialize_manifest(spec: TaskSpec) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "id": spec.id,
        "level": spec.level.value,
        "category": spec.category.value,
        "objective": spec.objective,
        "inputs": list(spec.inputs),
        "ground_truth": spec.ground_truth,
        "evaluator": spec.evaluator.to_obj(),
        "encoding": spec.encoding,
    }
    if spec.dag_composition is not None:
        obj["dag_composition"] = [
            {"subtask": s.subtask_id, "frozen_score": s.frozen_score} for s in spec.dag_composition
        ]
    return obj


def _manifest_path(task_dir: Path) -> Path | None:
    for name in MANIFEST_NAMES:
        candidate = task_dir / name
        if candidate.is_file():
            return candidate
    return None


def load_task(task_dir: str | Path) -> TaskSpec:
    task_dir = Path(task_dir)
    manifest = _manifest_path(task_dir)
    if manifest is None:
        raise ManifestError("no manifest file", path=str(task_dir))
    try:
        obj = json.loads(manifest.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"invalid JSON: {exc}", path=str(manifest)) from exc
    spec = parse_manifest(obj, path=str(manifest))
    for ref in (*spec.inputs, spec.ground_truth):
        if not (task_dir / ref).is_file():
            raise ManifestError(f"referenced data file missing: {ref}", path=str(manifest))
    return spec


def task_dir_of(pack_root: str | Path, task_id: str) -> Path:
    return Path(pack_root) / "tasks" / task_id


def resolve_ref(pack_root: str | Path, task: TaskSpec, ref: str) -> Path:
    return task_dir_of(pack_root, task.id) / ref


@dataclass
class TaskPack:
    root: Path
    pack_id: str
    alpha: float
    tasks: list[TaskSpec]
    frozen_scores: dict[str, float] = field(default_factory=dict)

    def task(self, task_id: str) -> TaskSpec:
        for t in self.tasks:
            if t.id == task_id:
                return t
        raise KeyError(task_id)

    def data_path(self, task: TaskSpec, ref: str) -> Path:
        return resolve_ref(self.root, task, ref)


def load_task_pack(path: str | Path) -> list[TaskSpec]:
    """Load every task manifest under ``path`` (a pack root with a tasks/
    directory, or a directory whose children are task directories)."""
    root = Path(path)
    tasks_dir = root / "tasks" if (root / "tasks").is_dir() else root
    specs: list[TaskSpec] = []
    seen: dict[str, str] = {}
    if not tasks_dir.is_dir():
        raise ManifestError("not a directory", path=str(path))
    for task_dir in sorted(p for p in tasks_dir.iterdir() if p.is_dir()):
        if _manifest_path(task_dir) is None:
            continue
        spec = load_task(task_dir)
        if spec.id in seen:
            raise ManifestError(
                f"duplicate task id '{spec.id}' (also in {seen[spec.id]})", path=str(task_dir)
            )
        seen[spec.id] = str(task_dir)
        specs.append(spec)
    return specs


def load_pack(path: str | Path) -> TaskPack:
    """Load a full pack: pack.toml metadata plus all task manifests."""
    root = Path(path)
    meta_path = root / "pack.toml"
    pack_id = root.name
    alpha = 1.0
    frozen: dict[str, float] = {}
    if meta_path.is_file():
        meta = tomllib.loads(meta_path.read_text(encoding="utf-8"))
        pack_id = str(meta.get("id", pack_id))
        alpha = float(meta.get("alpha", 1.0))
        frozen = {str(k): float(v) for k, v in meta.get("frozen_scores", {}).items()}
    if alpha < 0:
        raise ManifestError("alpha must be >= 0", path=str(meta_path), field="alpha")
    for task_id, score in frozen.items():
        if not 0.0 <= score <= 1.0:
            raise ManifestError(
                f"frozen score for '{task_id}' outside [0, 1]", path=str(meta_path), field="frozen_scores"
            )
    tasks = load_task_pack(root)
    return TaskPack(root=root, pack_id=pack_id, alpha=alpha, tasks=tasks, frozen_scores=frozen)


def write_pack_meta(root: str | Path, pack_id: str, alpha: float, frozen_scores: Mapping[str, float]) -> None:
    lines = [f'id = "{pack_id}"', f"alpha = {alpha}"]
    if frozen_scores:
        lines.append("")
        lines.append("[frozen_scores]")
        for task_id in sorted(frozen_scores):
            lines.append(f'"{task_id}" = {frozen_scores[task_id]}')
    Path(root, "pack.toml").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_task(pack_root: str | Path, spec: TaskSpec) -> Path:
    """Write a task manifest under the pack; data files are the caller's job."""
    task_dir = task_dir_of(pack_root, spec.id)
    task_dir.mkdir(parents=True, exist_ok=True)
    (task_dir / "manifest").write_text(
        json.dumps(serialize_manifest(spec), indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return task_dir
