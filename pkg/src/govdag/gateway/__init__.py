from govdag.gateway.base import Backend, Completion, CompletionParams, request_hash, whitespace_tokens
from govdag.gateway.live import HttpChatBackend
from govdag.gateway.mock import MockBackend
from govdag.gateway.pricing import cost_of, load_pricing
from govdag.gateway.replay import (
    RecordingBackend,
    ReplayBackend,
    TranscriptTurn,
    read_transcript,
    write_transcript,
)

__all__ = [
    "Backend",
    "Completion",
    "CompletionParams",
    "HttpChatBackend",
    "MockBackend",
    "RecordingBackend",
    "ReplayBackend",
    "TranscriptTurn",
    "cost_of",
    "load_pricing",
    "read_transcript",
    "request_hash",
    "whitespace_tokens",
    "write_transcript",
]
