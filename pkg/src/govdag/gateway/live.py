"""Live backend speaking an HTTP chat-completion wire protocol."""

from __future__ import annotations

import os
import time

import httpx

from govdag.errors import ConfigError, TransportError
from govdag.gateway.base import Backend, Completion, CompletionParams, whitespace_tokens

MAX_RETRIES = 3
BACKOFF_BASE_S = 0.5


class HttpChatBackend(Backend):
    """POSTs to ``<base_url>/chat/completions`` with a bearer key taken
    from an environment variable; transient transport failures are retried
    up to three times with exponential backoff."""

    def __init__(
        self,
        base_url: str,
        model_id: str,
        api_key_env: str = "GOVDAG_API_KEY",
        timeout_s: float = 120.0,
        transport: httpx.BaseTransport | None = None,
        sleep=time.sleep,
    ):
        api_key = os.environ.get(api_key_env)
        if not api_key:
            raise ConfigError(f"live backend needs the {api_key_env} environment variable")
        self._client = httpx.Client(
            base_url=base_url.rstrip("/"),
            headers={"Authorization": f"Bearer {api_key}"},
            timeout=timeout_s,
            transport=transport,
        )
        self._model_id = model_id
        self._sleep = sleep

    def complete(self, prompt: str, params: CompletionParams | None = None) -> Completion:
        params = params or CompletionParams(model_id=self._model_id)
        model = params.model_id if params.model_id != "mock" else self._model_id
        payload = {
            "model": model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        last_error: Exception | None = None
        for attempt in range(MAX_RETRIES + 1):
            if attempt:
                self._sleep(BACKOFF_BASE_S * 2 ** (attempt - 1))
            started = time.monotonic()
            try:
                response = self._client.post("/chat/completions", json=payload)
            except httpx.TransportError as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = TransportError(f"server error {response.status_code}")
                continue
            if response.status_code != 200:
                raise TransportError(f"chat completion failed: {response.status_code} {response.text[:200]}")
            body = response.json()
            text = body["choices"][0]["message"]["content"]
            usage = body.get("usage", {})
            return Completion(
                text=text,
                prompt_tokens=int(usage.get("prompt_tokens", whitespace_tokens(prompt))),
                completion_tokens=int(usage.get("completion_tokens", whitespace_tokens(text))),
                latency_s=time.monotonic() - started,
                model_id=model,
            )
        raise TransportError(f"exhausted {MAX_RETRIES} retries: {last_error}")
