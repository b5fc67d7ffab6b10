"""Exception hierarchy shared across the package."""

from __future__ import annotations


class GovdagError(Exception):
    """Base class for all govdag errors."""


class ManifestError(GovdagError):
    """A task manifest or pack file is malformed or violates an invariant."""

    def __init__(self, message: str, *, path: str | None = None, field: str | None = None):
        detail = message
        if field:
            detail = f"{detail} (field: {field})"
        if path:
            detail = f"{detail} [{path}]"
        super().__init__(detail)
        self.path = path
        self.field = field


class DataFileError(GovdagError):
    """A CSV/JSONL data file is unreadable or violates the encoding rules."""


class PlanningError(GovdagError):
    """The planner cannot produce a contract-satisfying pipeline."""


class TransportError(GovdagError):
    """A gateway backend failed at the network level after retries."""


class ProtocolError(GovdagError):
    """A model reply could not be parsed even after re-asks."""


class ReplayDivergenceError(GovdagError):
    """A replayed request did not match the recorded transcript."""


class SandboxConfigError(GovdagError):
    """The sandbox itself is misconfigured (distinct from script failure)."""


class PricingError(GovdagError):
    """A completion references a model with no configured price."""


class EvaluatorError(GovdagError):
    """An evaluator binding cannot be resolved or executed."""


class ConfigError(GovdagError):
    """Invalid run configuration or CLI usage."""
