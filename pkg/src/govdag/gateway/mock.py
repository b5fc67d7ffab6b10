"""In-process mock backend for deterministic tests."""

from __future__ import annotations

from typing import Callable

from govdag.gateway.base import Backend, Completion, CompletionParams, whitespace_tokens


class MockBackend(Backend):
    """Replies via a deterministic function of the prompt (default: echo).

    Token counts are whitespace token counts, latency is always zero, so a
    mock run is fully reproducible.
    """

    def __init__(self, reply_fn: Callable[[str], str] | None = None, model_id: str = "mock"):
        self._reply_fn = reply_fn or (lambda prompt: prompt)
        self._model_id = model_id

    def complete(self, prompt: str, params: CompletionParams | None = None) -> Completion:
        text = self._reply_fn(prompt)
        return Completion(
            text=text,
            prompt_tokens=whitespace_tokens(prompt),
            completion_tokens=whitespace_tokens(text),
            latency_s=0.0,
            model_id=self._model_id,
        )
