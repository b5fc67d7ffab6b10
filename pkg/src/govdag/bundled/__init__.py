"""Bundled sample assets: the seed operator library, a small task pack
(12 operator-level tasks plus 3 DAG-level tasks) and recorded transcripts
for offline end-to-end runs."""

from __future__ import annotations

from pathlib import Path

_ROOT = Path(__file__).resolve().parent


def seed_library_path() -> Path:
    return _ROOT / "library"


def sample_pack_path() -> Path:
    return _ROOT / "pack"


def transcript_path(name: str) -> Path:
    return _ROOT / "transcripts" / f"{name}.jsonl"
