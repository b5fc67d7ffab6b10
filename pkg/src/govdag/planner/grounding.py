"""Intent grounding: align the instruction with the actual data and assess
feasibility before any planning happens."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from typing import Any, Sequence

from govdag.core.types import SchemaDescriptor, TaskSpec
from govdag.errors import ProtocolError
from govdag.gateway.base import Backend, CompletionParams
from govdag.planner.prompts import load_template

log = logging.getLogger(__name__)

REASK_LIMIT = 2

# Static few-shot block for the grounding template.
GROUNDING_EXEMPLARS = """\
Instruction: remove rows whose text field contains profanity
Schema: jsonl [id: integer, text: string]
Reply: {"feasible": true, "normalized_goal": "Filter out rows whose text contains blocked words.", "infeasibility_reason": null, "referenced_columns": ["text"]}

Instruction: impute missing salaries
Schema: csv [id: integer, text: string]
Reply: {"feasible": false, "normalized_goal": "Impute missing salary values.", "infeasibility_reason": "The data has no salary column.", "referenced_columns": []}"""


@dataclass(frozen=True)
class GroundedIntent:
    normalized_goal: str
    feasible: bool
    infeasibility_reason: str | None = None
    referenced_columns: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.feasible and not self.infeasibility_reason:
            raise ValueError("infeasible intent requires a reason")


def build_grounding_prompt(
    objective: str, schema: SchemaDescriptor, samples: Sequence[dict[str, Any]]
) -> str:
    template = load_template("grounding")
    sample_lines = "\n".join(json.dumps(r, ensure_ascii=False, sort_keys=True) for r in samples[:5])
    return template.substitute(
        exemplars=GROUNDING_EXEMPLARS,
        objective=objective,
        schema=schema.render(),
        samples=sample_lines,
    )


def parse_json_reply(text: str) -> Any:
    """Extract the first JSON value from a model reply (the reply may wrap
    it in a code fence or prose)."""
    text = text.strip()
    fence = re.search(r"```(?:json)?\n(.*?)```", text, re.DOTALL)
    if fence:
        text = fence.group(1).strip()
    decoder = json.JSONDecoder()
    for start, char in enumerate(text):
        if char in "[{":
            try:
                value, _ = decoder.raw_decode(text[start:])
                return value
            except json.JSONDecodeError:
                continue
    raise ValueError("no JSON value found in reply")


def ask_json(
    gateway: Backend, prompt: str, params: CompletionParams | None = None
) -> tuple[Any, int, int]:
    """Completion round with up to two re-asks on unparseable replies.

    Returns (value, prompt_tokens, completion_tokens) accumulated over the
    attempts actually made.
    """
    params = params or CompletionParams()
    attempt_prompt = prompt
    prompt_tokens = 0
    completion_tokens = 0
    last_error: Exception | None = None
    for _ in range(REASK_LIMIT + 1):
        completion = gateway.complete(attempt_prompt, params)
        prompt_tokens += completion.prompt_tokens
        completion_tokens += completion.completion_tokens
        try:
            return parse_json_reply(completion.text), prompt_tokens, completion_tokens
        except ValueError as exc:
            last_error = exc
            attempt_prompt = (
                prompt + "\n\nYour previous reply was not parseable JSON. Reply with JSON only."
            )
    raise ProtocolError(f"unparseable reply after {REASK_LIMIT} re-asks: {last_error}")


def ground_intent(
    task: TaskSpec,
    schema: SchemaDescriptor,
    samples: Sequence[dict[str, Any]],
    gateway: Backend,
    params: CompletionParams | None = None,
) -> GroundedIntent:
    """Ground the task objective against the schema and samples.

    Columns the model references that do not exist are stripped and logged;
    a goal whose referenced columns are all absent is infeasible.
    """
    if not samples:
        raise ValueError("ground_intent requires at least one sample row")
    if not task.objective.strip():
        return GroundedIntent(
            normalized_goal="", feasible=False, infeasibility_reason="empty objective"
        )

    prompt = build_grounding_prompt(task.objective, schema, samples)
    reply, _, _ = ask_json(gateway, prompt, params)
    if not isinstance(reply, dict):
        raise ProtocolError(f"grounding reply is not a JSON object: {reply!r}")

    feasible = bool(reply.get("feasible"))
    goal = str(reply.get("normalized_goal", "")).strip() or task.objective
    reason = reply.get("infeasibility_reason")
    claimed = [str(c) for c in reply.get("referenced_columns", [])]

    known = set(schema.column_names)
    valid = tuple(c for c in claimed if c in known)
    hallucinated = [c for c in claimed if c not in known]
    if hallucinated:
        log.warning("grounding referenced unknown columns %s; stripped", hallucinated)
    if feasible and claimed and not valid:
        # Every column the goal operates on is absent from the data.
        feasible = False
        reason = f"objective references columns not in the data: {', '.join(sorted(hallucinated))}"

    if not feasible and not reason:
        reason = "model judged the goal infeasible"
    return GroundedIntent(
        normalized_goal=goal,
        feasible=feasible,
        infeasibility_reason=None if feasible else str(reason),
        referenced_columns=valid,
    )
