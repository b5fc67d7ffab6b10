"""The generate -> execute -> evaluate debug loop for one operator node.

Iteration counting: D includes the first attempt, so D=1 means the initial
generation was already runnable and contract-compliant.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from govdag.core.types import OperatorNode, Predicate
from govdag.errors import ProtocolError, TransportError
from govdag.executor.codegen import CodeArtifact, generate_code
from govdag.gateway.base import Backend, CompletionParams
from govdag.sandbox.feedback import build_feedback, make_diagnostic
from govdag.sandbox.postcheck import check_post
from govdag.sandbox.runner import ExecutionOutcome, SandboxLimits, run_sandboxed

log = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 20


@dataclass
class LoopResult:
    artifact: CodeArtifact
    outcome: ExecutionOutcome
    iterations: int  # D: generate->execute->evaluate cycles, first included
    output_path: Path | None
    violated: list[Predicate]
    exec_time_s: float
    gateway_error: str | None = None

    @property
    def compliant(self) -> bool:
        return self.outcome.ok and not self.violated


def debug_loop(
    node: OperatorNode,
    initial: CodeArtifact,
    limits: SandboxLimits,
    max_iter: int,
    gateway: Backend,
    inputs: Sequence[Path],
    job: Mapping[str, Any],
    task_context: str,
    workdir_root: Path,
    params: CompletionParams | None = None,
) -> LoopResult:
    """Run the node's artifact, check its contract, and regenerate from
    structured feedback until it is runnable and compliant or the
    iteration budget is spent."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    artifact = initial
    outcome: ExecutionOutcome | None = None
    violated: list[Predicate] = []
    output_path: Path | None = None
    exec_time = 0.0

    for iteration in range(1, max_iter + 1):
        attempt_dir = Path(workdir_root) / f"attempt_{iteration}"
        outcome = run_sandboxed(artifact, inputs, limits, workdir=attempt_dir, job=job)
        exec_time += outcome.duration_s
        output_path = attempt_dir / job["output"]
        violated = check_post(outcome, node, [output_path]) if outcome.ok else []
        if outcome.ok and not violated:
            return LoopResult(artifact, outcome, iteration, output_path, [], exec_time)
        if iteration == max_iter:
            break
        diagnostic = make_diagnostic(
            outcome, violated, task_context, artifact.source, abstract_op=node.abstract_op
        )
        prompt = build_feedback(diagnostic)
        try:
            artifact = generate_code(
                prompt,
                gateway,
                node_id=node.id,
                provenance=artifact.provenance,
                params=params,
                language_tag=artifact.language_tag,
            )
        except (TransportError, ProtocolError) as exc:
            log.warning("debug loop for node '%s' aborted by gateway error: %s", node.id, exc)
            return LoopResult(
                artifact, outcome, iteration, output_path, violated, exec_time, gateway_error=str(exc)
            )

    assert outcome is not None
    return LoopResult(artifact, outcome, max_iter, output_path, violated, exec_time)
