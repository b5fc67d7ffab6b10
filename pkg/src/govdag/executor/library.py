"""The curated operator library: one directory per card, holding a `card`
manifest and a `snippet` file. This corpus backs retrieval-augmented
code generation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from govdag.core.types import TaskCategory
from govdag.errors import ManifestError

CARD_NAMES = ("card", "card.json")
SNIPPET_NAMES = ("snippet", "snippet.py")


@dataclass(frozen=True)
class OperatorCard:
    name: str
    description: str
    snippet: str
    category: TaskCategory
    tags: tuple[str, ...] = ()
    param_schema: Mapping[str, str] = field(default_factory=dict)
    language: str = "python"

    def __post_init__(self) -> None:
        if not self.description.strip():
            raise ValueError(f"card '{self.name}': description must be non-empty")
        if not self.snippet.strip():
            raise ValueError(f"card '{self.name}': snippet must be non-empty")

    @property
    def document(self) -> str:
        """The retrievable text: description plus tags."""
        return self.description + " " + " ".join(self.tags)


def _find(card_dir: Path, names: tuple[str, ...]) -> Path | None:
    for name in names:
        candidate = card_dir / name
        if candidate.is_file():
            return candidate
    return None


def load_card(card_dir: str | Path) -> OperatorCard:
    card_dir = Path(card_dir)
    card_path = _find(card_dir, CARD_NAMES)
    snippet_path = _find(card_dir, SNIPPET_NAMES)
    if card_path is None:
        raise ManifestError("no card manifest", path=str(card_dir))
    if snippet_path is None:
        raise ManifestError("no snippet file", path=str(card_dir))
    try:
        obj: dict[str, Any] = json.loads(card_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"invalid JSON: {exc}", path=str(card_path)) from exc
    try:
        return OperatorCard(
            name=obj["name"],
            description=obj["description"],
            snippet=snippet_path.read_text(encoding="utf-8"),
            category=TaskCategory(obj["category"]),
            tags=tuple(obj.get("tags", ())),
            param_schema=dict(obj.get("params", {})),
            language=obj.get("language", "python"),
        )
    except (KeyError, ValueError) as exc:
        raise ManifestError(str(exc), path=str(card_path)) from exc


def load_library(path: str | Path) -> list[OperatorCard]:
    """Load every card directory under ``path``, sorted by card name."""
    root = Path(path)
    if not root.is_dir():
        raise ManifestError("library path is not a directory", path=str(path))
    cards = []
    names: dict[str, str] = {}
    for card_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        if _find(card_dir, CARD_NAMES) is None:
            continue
        card = load_card(card_dir)
        if card.name in names:
            raise ManifestError(
                f"duplicate card name '{card.name}' (also in {names[card.name]})", path=str(card_dir)
            )
        names[card.name] = str(card_dir)
        cards.append(card)
    return sorted(cards, key=lambda c: c.name)


def check_library(path: str | Path) -> list[str]:
    """Validate a library directory; returns human-readable problems."""
    problems: list[str] = []
    try:
        cards = load_library(path)
    except ManifestError as exc:
        return [str(exc)]
    if not cards:
        problems.append(f"{path}: library contains no cards")
    return problems
