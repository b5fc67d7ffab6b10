"""The operator payload pack: validated snippets (the retrieval seed
library), evaluation-script templates, and the sample fixtures that prove
each snippet against its category evaluator."""

from __future__ import annotations

from pathlib import Path

_ROOT = Path(__file__).resolve().parent


def pack_root() -> Path:
    return _ROOT / "pack"


def cards_root() -> Path:
    return pack_root() / "cards"


def samples_root() -> Path:
    return pack_root() / "samples"


def eval_templates_root() -> Path:
    return pack_root() / "eval_templates"
