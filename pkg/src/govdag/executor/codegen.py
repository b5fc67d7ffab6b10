"""Turning an operator node into executable script code via the gateway."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Sequence

from govdag.core.types import GovernanceContract, OperatorNode, SchemaDescriptor
from govdag.errors import ProtocolError
from govdag.executor.library import OperatorCard
from govdag.executor.prompts import load_template
from govdag.gateway.base import Backend, CompletionParams

REASK_LIMIT = 2

_FENCE_RE = re.compile(r"```(?:[a-zA-Z0-9_+-]*)\n(.*?)```", re.DOTALL)


@dataclass(frozen=True)
class CodeArtifact:
    """Generated script text plus its interpreter tag; the framework treats
    the payload as opaque so other script languages can plug in."""

    node_id: str
    source: str
    language_tag: str = "python"
    provenance: str = "rag"  # rag | free
    prompt_tokens: int = 0
    completion_tokens: int = 0


def render_contract(contract: GovernanceContract) -> str:
    lines = []
    for label, preds in (("pre", contract.pre), ("post", contract.post)):
        if preds:
            lines.append(f"{label}-conditions:")
            lines.extend(f"  - assert {p.describe()}" for p in preds)
        else:
            lines.append(f"{label}-conditions: none")
    return "\n".join(lines)


def render_exemplars(exemplars: Sequence[OperatorCard]) -> str:
    if not exemplars:
        return ""
    blocks = ["Reference operators from the validated library:"]
    for card in exemplars:
        blocks.append(f"### {card.name}\n{card.description}\n```{card.language}\n{card.snippet}```")
    return "\n\n" + "\n\n".join(blocks) + "\n"


def build_codegen_prompt(
    node: OperatorNode,
    exemplars: Sequence[OperatorCard],
    schema: SchemaDescriptor,
    samples: Sequence[dict[str, Any]],
) -> str:
    """Deterministic prompt: the node contract as explicit assertions, the
    schema, at most five sample rows, and one block per exemplar in
    retrieval order (omitted entirely when there are none)."""
    template = load_template("codegen")
    sample_lines = "\n".join(json.dumps(row, ensure_ascii=False, sort_keys=True) for row in samples[:5])
    return template.substitute(
        abstract_op=node.abstract_op,
        params=json.dumps(dict(node.params), ensure_ascii=False, sort_keys=True),
        contract=render_contract(node.contract),
        schema=schema.render(),
        samples=sample_lines,
        exemplar_section=render_exemplars(exemplars),
    )


def extract_code_block(text: str) -> str | None:
    match = _FENCE_RE.search(text)
    if match is None:
        return None
    return match.group(1)


def generate_code(
    prompt: str,
    gateway: Backend,
    node_id: str,
    provenance: str = "rag",
    params: CompletionParams | None = None,
    language_tag: str = "python",
) -> CodeArtifact:
    """Ask the gateway for code and extract the fenced block, re-asking up
    to twice on replies without one."""
    params = params or CompletionParams()
    attempt_prompt = prompt
    prompt_tokens = 0
    completion_tokens = 0
    for attempt in range(REASK_LIMIT + 1):
        completion = gateway.complete(attempt_prompt, params)
        prompt_tokens += completion.prompt_tokens
        completion_tokens += completion.completion_tokens
        source = extract_code_block(completion.text)
        if source is not None:
            return CodeArtifact(
                node_id=node_id,
                source=source,
                language_tag=language_tag,
                provenance=provenance,
                prompt_tokens=prompt_tokens,
                completion_tokens=completion_tokens,
            )
        attempt_prompt = (
            prompt
            + "\n\nYour previous reply did not contain a fenced code block. "
            + "Reply with exactly one fenced code block containing the full script."
        )
    raise ProtocolError(f"node '{node_id}': no code block after {REASK_LIMIT} re-asks")
