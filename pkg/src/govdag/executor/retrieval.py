"""Lexical TF-IDF retrieval over the operator library.

Weighting scheme (both query and documents): term frequency is the raw
count, idf = ln((1 + N) / (1 + df)) + 1 over the card corpus, and cards
are ranked by cosine similarity against the tokenized goal. Ties break by
ascending card name, so ranking is independent of library input order.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import Sequence

from govdag.executor.library import OperatorCard

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def _weights(tokens: Sequence[str], idf: dict[str, float], default_idf: float) -> dict[str, float]:
    counts = Counter(tokens)
    return {term: count * idf.get(term, default_idf) for term, count in counts.items()}


def _cosine(a: dict[str, float], b: dict[str, float]) -> float:
    dot = sum(weight * b[term] for term, weight in a.items() if term in b)
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


def score_cards(goal: str, library: Sequence[OperatorCard]) -> list[tuple[OperatorCard, float]]:
    """Cosine score for every card, sorted by (descending score, name)."""
    docs = {card.name: tokenize(card.document) for card in library}
    n = len(library)
    df = Counter()
    for tokens in docs.values():
        df.update(set(tokens))
    idf = {term: math.log((1 + n) / (1 + count)) + 1.0 for term, count in df.items()}
    default_idf = math.log(1 + n) + 1.0  # unseen terms

    query = _weights(tokenize(goal), idf, default_idf)
    scored = [
        (card, _cosine(query, _weights(docs[card.name], idf, default_idf))) for card in library
    ]
    return sorted(scored, key=lambda pair: (-pair[1], pair[0].name))


def retrieve_ops(goal: str, library: Sequence[OperatorCard], k: int = 4) -> list[OperatorCard]:
    """Top-k most relevant cards for a goal (defaults to the top 4)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not library:
        raise ValueError("library must be non-empty")
    return [card for card, _ in score_cards(goal, library)[:k]]
