"""The assembly line: plan a task, realize each operator, debug it in the
sandbox, score the final output, and emit one RunRecord per task."""

from __future__ import annotations

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from govdag.benchkit.scoring import score_dag_outputs, score_operator_output
from govdag.core.dag import topo_order
from govdag.core.manifest import TaskPack
from govdag.core.tabular import infer_schema, sample_rows
from govdag.core.types import GovDag, OperatorNode, RunRecord, TaskLevel, TaskSpec
from govdag.errors import ConfigError, GovdagError
from govdag.executor.codegen import build_codegen_prompt, generate_code
from govdag.executor.library import OperatorCard
from govdag.executor.retrieval import retrieve_ops
from govdag.gateway.base import Backend, Completion, CompletionParams
from govdag.gateway.pricing import cost_of
from govdag.metrics.aggregate import is_success
from govdag.planner.contracts import ContractViolation, plan_chain, schema_facts
from govdag.planner.grounding import GroundedIntent, ground_intent
from govdag.sandbox.loop import DEFAULT_MAX_ITER, LoopResult, debug_loop
from govdag.sandbox.runner import SandboxLimits

log = logging.getLogger(__name__)

ABLATIONS = ("none", "no_planner", "no_rag")
BACKENDS = ("live", "mock", "replay")


@dataclass
class RunConfig:
    backend: str = "mock"
    model_id: str = "mock"
    limits: SandboxLimits = field(default_factory=SandboxLimits)
    max_iter: int = DEFAULT_MAX_ITER
    k: int = 4
    ablation: str = "none"
    parallelism: int = 1
    transcript: Path | None = None
    pricing: dict | None = None
    completion_params: CompletionParams = field(default_factory=CompletionParams)

    def __post_init__(self) -> None:
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend '{self.backend}'")
        if self.ablation not in ABLATIONS:
            raise ConfigError(f"unknown ablation '{self.ablation}'")
        if self.backend == "replay" and self.transcript is None:
            raise ConfigError("replay backend requires a transcript path")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")


class MeteringBackend(Backend):
    """Per-task accounting wrapper around a shared backend handle."""

    def __init__(self, inner: Backend):
        self._inner = inner
        self._lock = threading.Lock()
        self.completions: list[Completion] = []

    def complete(self, prompt: str, params: CompletionParams | None = None) -> Completion:
        completion = self._inner.complete(prompt, params)
        with self._lock:
            self.completions.append(completion)
        return completion

    @property
    def calls(self) -> int:
        return len(self.completions)

    @property
    def tokens(self) -> int:
        return sum(c.prompt_tokens + c.completion_tokens for c in self.completions)

    @property
    def latency_s(self) -> float:
        return sum(c.latency_s for c in self.completions)


@dataclass
class TaskRunDetail:
    record: RunRecord
    dag: GovDag | None = None
    intent: GroundedIntent | None = None
    violations: list[ContractViolation] = field(default_factory=list)
    node_results: dict[str, LoopResult] = field(default_factory=dict)
    stage_outputs: list[Path | None] = field(default_factory=list)
    calls: int = 0
    error: str | None = None


def _whole_task_dag(task: TaskSpec) -> GovDag:
    node = OperatorNode(id="solve-task-1", abstract_op="Solve Task", params={"objective": task.objective})
    return GovDag(nodes=(node,), edges=())


def plan_task(
    pack: TaskPack,
    task: TaskSpec,
    gateway: Backend,
    config: RunConfig,
) -> tuple[GovDag, list[ContractViolation], GroundedIntent]:
    """Ground, extract contracts, synthesize the chain, check it and insert
    repairs. Refuses to run under the no_planner ablation."""
    from govdag.planner.contracts import extract_contracts

    if config.ablation == "no_planner":
        raise ConfigError("planning is disabled under the no_planner ablation")
    primary = pack.data_path(task, task.inputs[0])
    schema = infer_schema(primary)
    samples = sample_rows(primary)
    intent = ground_intent(task, schema, samples, gateway, config.completion_params)
    if not intent.feasible:
        return GovDag(), [], intent
    ops = extract_contracts(intent, schema, gateway, samples, config.completion_params)
    dag, violations = plan_chain(ops, schema_facts(schema))
    return dag, violations, intent


def _retrieval_goal(node: OperatorNode) -> str:
    parts = [node.abstract_op]
    for key in sorted(node.params):
        value = node.params[key]
        if isinstance(value, (list, tuple)):
            parts.extend(str(v) for v in value)
        elif not isinstance(value, dict):
            parts.append(str(value))
    return " ".join(parts)


def run_task(
    pack: TaskPack,
    task: TaskSpec,
    library: Sequence[OperatorCard],
    gateway: Backend,
    config: RunConfig,
    workdir_root: Path,
) -> TaskRunDetail:
    """Execute the full assembly line for one task."""
    meter = MeteringBackend(gateway)
    workdir_root = Path(workdir_root)
    detail = TaskRunDetail(record=_failed_record(task.id, 1, meter, 0.0, config))

    input_paths = [pack.data_path(task, ref) for ref in task.inputs]
    total_iterations = 0
    exec_time = 0.0

    try:
        if config.ablation == "no_planner":
            dag, violations, intent = _whole_task_dag(task), [], None
        else:
            dag, violations, intent = plan_task(pack, task, meter, config)
        detail.dag, detail.violations, detail.intent = dag, violations, intent
        if intent is not None and not intent.feasible:
            detail.error = f"infeasible: {intent.infeasibility_reason}"
            detail.record = _failed_record(task.id, 1, meter, exec_time, config)
            detail.calls = meter.calls
            return detail

        order = topo_order(dag)
        current_inputs = list(input_paths)
        gt_suffix = Path(task.ground_truth).suffix
        stage_outputs: list[Path | None] = []
        runnable = True

        for position, node_id in enumerate(order, start=1):
            node = dag.node(node_id)
            is_last = position == len(order)
            suffix = gt_suffix if is_last else Path(current_inputs[0]).suffix
            out_name = f"out/result{suffix}" if is_last else f"out/step_{position}{suffix}"

            schema = infer_schema(current_inputs[0])
            samples = sample_rows(current_inputs[0])
            if config.ablation in ("no_rag", "no_planner"):
                exemplars: list[OperatorCard] = []
                provenance = "free"
            else:
                exemplars = retrieve_ops(_retrieval_goal(node), library, config.k)
                provenance = "rag"
            prompt = build_codegen_prompt(node, exemplars, schema, samples)
            initial = generate_code(
                prompt, meter, node_id=node.id, provenance=provenance, params=config.completion_params
            )
            job = {
                "inputs": [f"inputs/{Path(p).name}" for p in current_inputs],
                "output": out_name,
                "params": dict(node.params),
            }
            context = f"Task objective: {task.objective}\nCurrent operator: {node.abstract_op}"
            result = debug_loop(
                node,
                initial,
                config.limits,
                config.max_iter,
                meter,
                inputs=current_inputs,
                job=job,
                task_context=context,
                workdir_root=workdir_root / node.id,
                params=config.completion_params,
            )
            detail.node_results[node.id] = result
            total_iterations += result.iterations
            exec_time += result.exec_time_s
            if not node.repair:
                stage_outputs.append(result.output_path if result.outcome.ok else None)
            if not result.compliant:
                runnable = False
                if result.output_path is None or not result.outcome.ok:
                    break
            if result.output_path is not None and result.output_path.is_file():
                current_inputs = [result.output_path]
            else:
                runnable = False
                break

        detail.stage_outputs = stage_outputs
        score = _score(pack, task, stage_outputs)
        record = RunRecord(
            task_id=task.id,
            debug_iterations=max(1, total_iterations),
            tokens=meter.tokens,
            gen_time_s=meter.latency_s,
            exec_time_s=0.0 if config.backend == "replay" else exec_time,
            cost=cost_of(meter.completions, config.pricing) if config.pricing else 0.0,
            score=score,
            runnable=runnable,
            success=runnable and is_success(score),
        )
        detail.record = record
    except GovdagError as exc:
        log.warning("task '%s' failed: %s", task.id, exc)
        detail.error = str(exc)
        detail.record = _failed_record(task.id, max(1, total_iterations), meter, exec_time, config)
    detail.calls = meter.calls
    return detail


def _score(pack: TaskPack, task: TaskSpec, stage_outputs: list[Path | None]) -> float:
    if task.level is TaskLevel.DAG:
        combined, _ = score_dag_outputs(pack, task, stage_outputs)
        return combined
    final = stage_outputs[-1] if stage_outputs else None
    if final is None or not Path(final).is_file():
        return 0.0
    return score_operator_output(pack, task, final).score


def _failed_record(
    task_id: str, iterations: int, meter: MeteringBackend, exec_time: float, config: RunConfig
) -> RunRecord:
    return RunRecord(
        task_id=task_id,
        debug_iterations=iterations,
        tokens=meter.tokens,
        gen_time_s=meter.latency_s,
        exec_time_s=0.0 if config.backend == "replay" else exec_time,
        cost=cost_of(meter.completions, config.pricing) if config.pricing else 0.0,
        score=0.0,
        runnable=False,
        success=False,
    )


def run_pack(
    pack: TaskPack,
    library: Sequence[OperatorCard],
    gateway: Backend,
    config: RunConfig,
    workdir_root: Path,
) -> list[TaskRunDetail]:
    """Run every task in the pack with at most ``parallelism`` concurrent
    pipelines; the result order always follows the pack's task order."""
    workdir_root = Path(workdir_root)
    workdir_root.mkdir(parents=True, exist_ok=True)

    def one(task: TaskSpec) -> TaskRunDetail:
        return run_task(pack, task, library, gateway, config, workdir_root / task.id)

    if config.parallelism == 1:
        return [one(task) for task in pack.tasks]
    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        return list(pool.map(one, pack.tasks))


def render_dag(dag: GovDag, violations: Sequence[ContractViolation] = ()) -> str:
    """Stable text rendering of a planned DAG plus its contract report."""
    lines = ["GovDAG"]
    order = topo_order(dag) if dag.nodes else []
    for node_id in order:
        node = dag.node(node_id)
        marker = " [repair]" if node.repair else ""
        lines.append(f"  {node_id}: {node.abstract_op}{marker}")
        lines.append(f"    params: {json.dumps(dict(node.params), sort_keys=True)}")
        for label, preds in (("pre", node.contract.pre), ("post", node.contract.post)):
            for pred in preds:
                lines.append(f"    {label}: {pred.describe()}")
    if dag.edges:
        lines.append("  edges:")
        for src, dst in sorted(dag.edges):
            lines.append(f"    {src} -> {dst}")
    lines.append(f"  repaired violations: {len(violations)}")
    for violation in violations:
        src = violation.edge[0] or "(source)"
        lines.append(
            f"    {src} -> {violation.edge[1]}: {violation.unmet.describe()}"
            + (f" (repair: {violation.suggested_repair})" if violation.suggested_repair else "")
        )
    return "\n".join(lines)
