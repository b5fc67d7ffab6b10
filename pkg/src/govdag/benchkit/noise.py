"""Noisy-data synthesis by objective reversal: first invert the task goal
into a disruption description, then generate the code that introduces the
disruption, then execute it in the sandbox against a copy of the ground
truth."""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from govdag.benchkit.prompts import load_template
from govdag.core.types import TaskSpec
from govdag.errors import ProtocolError
from govdag.executor.codegen import CodeArtifact, generate_code
from govdag.gateway.base import Backend, CompletionParams
from govdag.sandbox.runner import ExecutionOutcome, SandboxLimits, run_sandboxed

REASK_LIMIT = 2


@dataclass(frozen=True)
class NoiseRecipe:
    reversed_objective: str
    noise_code: CodeArtifact


def _render_samples(samples: Sequence[dict[str, Any]]) -> str:
    return "\n".join(json.dumps(r, ensure_ascii=False, sort_keys=True) for r in samples[:5])


def reverse_objective(
    task: TaskSpec,
    samples: Sequence[dict[str, Any]],
    gateway: Backend,
    params: CompletionParams | None = None,
) -> str:
    """Invert the task goal into a description of how to disrupt the data."""
    if not task.objective.strip():
        raise ValueError(f"task '{task.id}' has an empty objective")
    template = load_template("reverse")
    prompt = template.substitute(
        objective=task.objective,
        category=task.category.value,
        samples=_render_samples(samples),
    )
    attempt_prompt = prompt
    for _ in range(REASK_LIMIT + 1):
        completion = gateway.complete(attempt_prompt, params or CompletionParams())
        text = completion.text.strip()
        if text:
            return text
        attempt_prompt = prompt + "\n\nYour previous reply was empty. Reply with the reversed objective."
    raise ProtocolError(f"task '{task.id}': empty reversal after {REASK_LIMIT} re-asks")


def generate_noise_code(
    reversed_objective: str,
    samples: Sequence[dict[str, Any]],
    gateway: Backend,
    params: CompletionParams | None = None,
) -> CodeArtifact:
    template = load_template("noise")
    prompt = template.substitute(
        reversed_objective=reversed_objective, samples=_render_samples(samples)
    )
    return generate_code(prompt, gateway, node_id="noise", provenance="free", params=params)


def build_noise_recipe(
    task: TaskSpec,
    samples: Sequence[dict[str, Any]],
    gateway: Backend,
    params: CompletionParams | None = None,
) -> NoiseRecipe:
    reversed_objective = reverse_objective(task, samples, gateway, params)
    noise_code = generate_noise_code(reversed_objective, samples, gateway, params)
    return NoiseRecipe(reversed_objective=reversed_objective, noise_code=noise_code)


def generate_eval_script(
    task: TaskSpec,
    samples: Sequence[dict[str, Any]],
    gateway: Backend,
    params: CompletionParams | None = None,
) -> CodeArtifact:
    """LLM-written evaluation script for kind=script bindings; callers must
    gate the result through the consistency check before trusting it."""
    template = load_template("eval_script")
    prompt = template.substitute(
        objective=task.objective,
        category=task.category.value,
        samples=_render_samples(samples),
    )
    return generate_code(prompt, gateway, node_id="eval", provenance="free", params=params)


def synthesize_noise(
    recipe: NoiseRecipe,
    gt_path: Path,
    dest_path: Path,
    limits: SandboxLimits | None = None,
    workdir: Path | None = None,
) -> tuple[ExecutionOutcome, Path | None]:
    """Run the noise code against a copy of the ground truth; on success the
    disrupted file lands at ``dest_path`` and the ground truth is untouched.

    A failing outcome is returned (not raised) so callers can surface it
    for manual repair.
    """
    import tempfile

    gt_path = Path(gt_path)
    workdir = Path(workdir) if workdir else Path(tempfile.mkdtemp(prefix="govdag-noise-"))
    job = {"inputs": [f"inputs/{gt_path.name}"], "output": f"out/noisy{gt_path.suffix}", "params": {}}
    outcome = run_sandboxed(
        recipe.noise_code,
        [gt_path],
        limits or SandboxLimits(wall_clock_s=60.0),
        workdir=workdir,
        job=job,
    )
    produced = workdir / job["output"]
    if not outcome.ok or not produced.is_file():
        return outcome, None
    dest_path = Path(dest_path)
    dest_path.parent.mkdir(parents=True, exist_ok=True)
    shutil.copyfile(produced, dest_path)
    return outcome, dest_path
