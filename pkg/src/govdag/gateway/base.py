"""Uniform completion interface for every backend."""

from __future__ import annotations

import hashlib
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass


@dataclass(frozen=True)
class CompletionParams:
    temperature: float = 0.0
    max_tokens: int = 4096
    model_id: str = "mock"


@dataclass(frozen=True)
class Completion:
    text: str
    prompt_tokens: int
    completion_tokens: int
    latency_s: float
    model_id: str

    def to_obj(self) -> dict:
        return {
            "text": self.text,
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
            "latency_s": self.latency_s,
            "model_id": self.model_id,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "Completion":
        return cls(
            text=obj["text"],
            prompt_tokens=int(obj["prompt_tokens"]),
            completion_tokens=int(obj["completion_tokens"]),
            latency_s=float(obj["latency_s"]),
            model_id=obj["model_id"],
        )


def request_hash(prompt: str, params: CompletionParams) -> str:
    """SHA-256 over the prompt bytes and canonicalized params; any prompt
    drift between record and replay shows up as a hash mismatch."""
    canon = json.dumps(
        {
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
            "model_id": params.model_id,
        },
        sort_keys=True,
    )
    digest = hashlib.sha256()
    digest.update(prompt.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(canon.encode("utf-8"))
    return digest.hexdigest()


def whitespace_tokens(text: str) -> int:
    return len(text.split())


class Backend(ABC):
    """A completion backend; handles are shareable across concurrent loops."""

    @abstractmethod
    def complete(self, prompt: str, params: CompletionParams | None = None) -> Completion:
        raise NotImplementedError
