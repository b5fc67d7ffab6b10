"""Record/replay backends: any recorded session can be replayed
byte-identically, and replay fails loudly on divergence."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from govdag.errors import ReplayDivergenceError
from govdag.gateway.base import Backend, Completion, CompletionParams, request_hash


@dataclass(frozen=True)
class TranscriptTurn:
    request_hash: str
    prompt: str
    completion: Completion

    def to_obj(self) -> dict:
        return {
            "request_hash": self.request_hash,
            "prompt": self.prompt,
            "completion": self.completion.to_obj(),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "TranscriptTurn":
        return cls(
            request_hash=obj["request_hash"],
            prompt=obj["prompt"],
            completion=Completion.from_obj(obj["completion"]),
        )


def write_transcript(path: str | Path, turns: list[TranscriptTurn]) -> None:
    lines = [json.dumps(t.to_obj(), ensure_ascii=False) for t in turns]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_transcript(path: str | Path) -> list[TranscriptTurn]:
    turns = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            turns.append(TranscriptTurn.from_obj(json.loads(line)))
    return turns


class RecordingBackend(Backend):
    """Wraps another backend and records every turn, in order."""

    def __init__(self, inner: Backend):
        self._inner = inner
        self._turns: list[TranscriptTurn] = []
        self._lock = threading.Lock()

    def complete(self, prompt: str, params: CompletionParams | None = None) -> Completion:
        params = params or CompletionParams()
        completion = self._inner.complete(prompt, params)
        with self._lock:
            self._turns.append(
                TranscriptTurn(request_hash=request_hash(prompt, params), prompt=prompt, completion=completion)
            )
        return completion

    @property
    def turns(self) -> list[TranscriptTurn]:
        return list(self._turns)

    def save(self, path: str | Path) -> None:
        write_transcript(path, self._turns)


class ReplayBackend(Backend):
    """Serves a recorded transcript strictly in order, matching each
    request hash; a mismatch or an exhausted transcript is an error,
    never a silent fallback."""

    def __init__(self, transcript: str | Path | list[TranscriptTurn]):
        if isinstance(transcript, (str, Path)):
            self._turns = read_transcript(transcript)
        else:
            self._turns = list(transcript)
        self._cursor = 0
        self._lock = threading.Lock()

    def complete(self, prompt: str, params: CompletionParams | None = None) -> Completion:
        params = params or CompletionParams()
        wanted = request_hash(prompt, params)
        with self._lock:
            if self._cursor >= len(self._turns):
                raise ReplayDivergenceError(
                    f"transcript exhausted after {len(self._turns)} turns; got extra request {wanted[:12]}..."
                )
            turn = self._turns[self._cursor]
            if turn.request_hash != wanted:
                raise ReplayDivergenceError(
                    f"turn {self._cursor}: request hash {wanted[:12]}... does not match "
                    f"recorded {turn.request_hash[:12]}..."
                )
            self._cursor += 1
        return turn.completion

    @property
    def remaining(self) -> int:
        return len(self._turns) - self._cursor
