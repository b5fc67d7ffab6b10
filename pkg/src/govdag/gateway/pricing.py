"""Token/cost accounting. Rates are configuration, never hardcoded."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping

from govdag.errors import PricingError
from govdag.gateway.base import Completion

Rate = tuple[float, float]  # (per-prompt-token, per-completion-token)


def load_pricing(path: str | Path) -> dict[str, Rate]:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    pricing = {}
    for model_id, rates in obj.items():
        pricing[model_id] = (float(rates["in_rate"]), float(rates["out_rate"]))
    return pricing


def cost_of(completions: Iterable[Completion], pricing: Mapping[str, Rate]) -> float:
    """Sum of prompt_tokens * in_rate + completion_tokens * out_rate."""
    total = 0.0
    for completion in completions:
        if completion.model_id not in pricing:
            raise PricingError(f"no pricing configured for model '{completion.model_id}'")
        in_rate, out_rate = pricing[completion.model_id]
        total += completion.prompt_tokens * in_rate + completion.completion_tokens * out_rate
    return total
