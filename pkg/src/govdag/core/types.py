"""Domain types shared by every module.

All types here are immutable values after construction, so they can be
shared freely between concurrent task runners.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

from govdag.errors import ManifestError


class TaskLevel(str, Enum):
    OPERATOR = "operator"
    DAG = "dag"


class TaskCategory(str, Enum):
    FILTERING = "filtering"
    REFINEMENT = "refinement"
    IMPUTATION = "imputation"
    DEDUP_CONSISTENCY = "dedup_consistency"
    INTEGRATION = "integration"
    CLASSIFICATION = "classification"


class PredicateKind(str, Enum):
    COLUMN_EXISTS = "column_exists"
    TYPE_IS = "type_is"
    NO_NULLS = "no_nulls"
    UNIQUE_KEY = "unique_key"
    VALUE_FORMAT = "value_format"
    ROW_COUNT_MIN = "row_count_min"
    FILE_FORMAT = "file_format"


COARSE_TYPES = ("integer", "real", "string", "boolean", "datetime")
FILE_FORMATS = ("csv", "jsonl")

# Which argument fields each predicate kind requires.
_PREDICATE_ARGS: dict[PredicateKind, tuple[str, ...]] = {
    PredicateKind.COLUMN_EXISTS: ("column",),
    PredicateKind.TYPE_IS: ("column", "type_name"),
    PredicateKind.NO_NULLS: ("column",),
    PredicateKind.UNIQUE_KEY: ("column",),
    PredicateKind.VALUE_FORMAT: ("column", "format"),
    PredicateKind.ROW_COUNT_MIN: ("min_rows",),
    PredicateKind.FILE_FORMAT: ("format",),
}


@dataclass(frozen=True)
class Predicate:
    """One verifiable condition over a data file.

    The argument record is kind-specific: ``column`` for column-scoped
    kinds, ``type_name`` for type_is, ``format`` for value_format (a
    regular expression) and file_format (csv/jsonl), ``min_rows`` for
    row_count_min.
    """

    kind: PredicateKind
    column: str | None = None
    type_name: str | None = None
    format: str | None = None
    min_rows: int | None = None

    def __post_init__(self) -> None:
        required = _PREDICATE_ARGS[self.kind]
        values = {
            "column": self.column,
            "type_name": self.type_name,
            "format": self.format,
            "min_rows": self.min_rows,
        }
        for name in required:
            if values[name] is None:
                raise ValueError(f"predicate {self.kind.value} requires arg '{name}'")
        for name, value in values.items():
            if name not in required and value is not None:
                raise ValueError(f"predicate {self.kind.value} does not take arg '{name}'")
        if self.kind is PredicateKind.TYPE_IS and self.type_name not in COARSE_TYPES:
            raise ValueError(f"unknown coarse type {self.type_name!r}")
        if self.kind is PredicateKind.VALUE_FORMAT:
            assert self.format is not None
            re.compile(self.format)
        if self.kind is PredicateKind.FILE_FORMAT and self.format not in FILE_FORMATS:
            raise ValueError(f"unknown file format {self.format!r}")
        if self.kind is PredicateKind.ROW_COUNT_MIN:
            assert self.min_rows is not None
            if self.min_rows < 0:
                raise ValueError("row_count_min bound must be >= 0")

    # Convenience constructors keep call sites terse.
    @classmethod
    def column_exists(cls, column: str) -> "Predicate":
        return cls(PredicateKind.COLUMN_EXISTS, column=column)

    @classmethod
    def type_is(cls, column: str, type_name: str) -> "Predicate":
        return cls(PredicateKind.TYPE_IS, column=column, type_name=type_name)

    @classmethod
    def no_nulls(cls, column: str) -> "Predicate":
        return cls(PredicateKind.NO_NULLS, column=column)

    @classmethod
    def unique_key(cls, column: str) -> "Predicate":
        return cls(PredicateKind.UNIQUE_KEY, column=column)

    @classmethod
    def value_format(cls, column: str, format: str) -> "Predicate":
        return cls(PredicateKind.VALUE_FORMAT, column=column, format=format)

    @classmethod
    def row_count_min(cls, min_rows: int) -> "Predicate":
        return cls(PredicateKind.ROW_COUNT_MIN, min_rows=min_rows)

    @classmethod
    def file_format(cls, format: str) -> "Predicate":
        return cls(PredicateKind.FILE_FORMAT, format=format)

    def describe(self) -> str:
        if self.kind is PredicateKind.COLUMN_EXISTS:
            return f"column '{self.column}' exists"
        if self.kind is PredicateKind.TYPE_IS:
            return f"column '{self.column}' has type {self.type_name}"
        if self.kind is PredicateKind.NO_NULLS:
            return f"column '{self.column}' has no null/empty values"
        if self.kind is PredicateKind.UNIQUE_KEY:
            return f"column '{self.column}' values are unique"
        if self.kind is PredicateKind.VALUE_FORMAT:
            return f"column '{self.column}' values match /{self.format}/"
        if self.kind is PredicateKind.ROW_COUNT_MIN:
            return f"row count >= {self.min_rows}"
        return f"file format is {self.format}"

    def to_obj(self) -> dict[str, Any]:
        obj: dict[str, Any] = {"kind": self.kind.value}
        for name in _PREDICATE_ARGS[self.kind]:
            obj[name] = getattr(self, name)
        return obj

    @classmethod
    def from_obj(cls, obj: Mapping[str, Any]) -> "Predicate":
        try:
            kind = PredicateKind(obj["kind"])
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad predicate object {obj!r}") from exc
        args = {k: v for k, v in obj.items() if k != "kind"}
        return cls(kind, **args)


@dataclass(frozen=True)
class GovernanceContract:
    """Pre/post predicate lists attached to one abstract operator."""

    pre: tuple[Predicate, ...] = ()
    post: tuple[Predicate, ...] = ()

    def __post_init__(self) -> None:
        for name, preds in (("pre", self.pre), ("post", self.post)):
            if len(set(preds)) != len(preds):
                raise ValueError(f"duplicate predicates in {name} list")

    def to_obj(self) -> dict[str, Any]:
        return {
            "pre": [p.to_obj() for p in self.pre],
            "post": [p.to_obj() for p in self.post],
        }

    @classmethod
    def from_obj(cls, obj: Mapping[str, Any]) -> "GovernanceContract":
        return cls(
            pre=tuple(Predicate.from_obj(p) for p in obj.get("pre", ())),
            post=tuple(Predicate.from_obj(p) for p in obj.get("post", ())),
        )


@dataclass(frozen=True)
class OperatorNode:
    """One abstract operator in a governance pipeline."""

    id: str
    abstract_op: str
    params: Mapping[str, Any] = field(default_factory=dict)
    contract: GovernanceContract = field(default_factory=GovernanceContract)
    repair: bool = False

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "abstract_op": self.abstract_op,
            "params": dict(self.params),
            "contract": self.contract.to_obj(),
            "repair": self.repair,
        }


@dataclass(frozen=True)
class GovDag:
    """An acyclic graph of operator nodes; edges are (from_id, to_id)."""

    nodes: tuple[OperatorNode, ...] = ()
    edges: tuple[tuple[str, str], ...] = ()

    def node(self, node_id: str) -> OperatorNode:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(node_id)

    def to_obj(self) -> dict[str, Any]:
        return {
            "nodes": [n.to_obj() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
        }


class EvaluatorKind(str, Enum):
    BUILTIN_FILTERING = "builtin_filtering"
    BUILTIN_REFINEMENT = "builtin_refinement"
    BUILTIN_IMPUTATION = "builtin_imputation"
    BUILTIN_DEDUP = "builtin_dedup"
    BUILTIN_INTEGRATION = "builtin_integration"
    BUILTIN_CLASSIFICATION = "builtin_classification"
    SCRIPT = "script"


@dataclass(frozen=True)
class EvaluatorBinding:
    """How a task's output is scored: a builtin scorer or a script asset."""

    kind: EvaluatorKind
    params: Mapping[str, Any] = field(default_factory=dict)
    script_ref: str | None = None

    def __post_init__(self) -> None:
        if self.kind is EvaluatorKind.SCRIPT and not self.script_ref:
            raise ValueError("script evaluator requires script_ref")
        if self.kind is not EvaluatorKind.SCRIPT and self.script_ref:
            raise ValueError("script_ref only valid for kind=script")

    def to_obj(self) -> dict[str, Any]:
        obj: dict[str, Any] = {"kind": self.kind.value, "params": dict(self.params)}
        if self.script_ref:
            obj["script_ref"] = self.script_ref
        return obj

    @classmethod
    def from_obj(cls, obj: Mapping[str, Any]) -> "EvaluatorBinding":
        return cls(
            kind=EvaluatorKind(obj["kind"]),
            params=dict(obj.get("params", {})),
            script_ref=obj.get("script_ref"),
        )


@dataclass(frozen=True)
class DagStep:
    """One entry of a DAG-level task's composition: a seed subtask plus the
    frozen reference score used for difficulty weighting."""

    subtask_id: str
    frozen_score: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.frozen_score <= 1.0:
            raise ValueError(f"frozen_score {self.frozen_score} outside [0, 1]")


TASK_ENCODING = "utf-8"  # UTF-8 without byte-order mark, for every data file


@dataclass(frozen=True)
class TaskSpec:
    """One benchmark task."""

    id: str
    level: TaskLevel
    category: TaskCategory
    objective: str
    inputs: tuple[str, ...]
    ground_truth: str
    evaluator: EvaluatorBinding
    dag_composition: tuple[DagStep, ...] | None = None
    encoding: str = TASK_ENCODING

    def __post_init__(self) -> None:
        if self.encoding != TASK_ENCODING:
            raise ManifestError(
                f"unsupported encoding {self.encoding!r}; data files are UTF-8 without BOM",
                field="encoding",
            )
        if self.level is TaskLevel.DAG:
            if self.dag_composition is None:
                raise ManifestError("dag-level task missing dag_composition", field="dag_composition")
            if len(self.dag_composition) <= 2:
                raise ManifestError(
                    f"dag_composition has {len(self.dag_composition)} steps; must be longer than 2",
                    field="dag_composition",
                )
        elif self.dag_composition is not None:
            raise ManifestError(
                "operator-level task must not carry dag_composition", field="dag_composition"
            )


@dataclass(frozen=True)
class RunRecord:
    """Per-task telemetry emitted by a run."""

    task_id: str
    debug_iterations: int
    tokens: int
    gen_time_s: float
    exec_time_s: float
    cost: float
    score: float
    runnable: bool
    success: bool

    def __post_init__(self) -> None:
        if self.debug_iterations < 1:
            raise ValueError("debug_iterations must be >= 1")
        if self.tokens < 0:
            raise ValueError("tokens must be >= 0")
        if self.gen_time_s < 0 or self.exec_time_s < 0 or self.cost < 0:
            raise ValueError("times and cost must be >= 0")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")
        if self.success and not self.runnable:
            raise ValueError("success implies runnable")

    def to_obj(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "debug_iterations": self.debug_iterations,
            "tokens": self.tokens,
            "gen_time_s": self.gen_time_s,
            "exec_time_s": self.exec_time_s,
            "cost": self.cost,
            "score": self.score,
            "runnable": self.runnable,
            "success": self.success,
        }

    @classmethod
    def from_obj(cls, obj: Mapping[str, Any]) -> "RunRecord":
        return cls(
            task_id=obj["task_id"],
            debug_iterations=int(obj["debug_iterations"]),
            tokens=int(obj["tokens"]),
            gen_time_s=float(obj["gen_time_s"]),
            exec_time_s=float(obj["exec_time_s"]),
            cost=float(obj["cost"]),
            score=float(obj["score"]),
            runnable=bool(obj["runnable"]),
            success=bool(obj["success"]),
        )


@dataclass(frozen=True)
class ColumnInfo:
    name: str
    coarse_type: str  # one of COARSE_TYPES

    def __post_init__(self) -> None:
        if self.coarse_type not in COARSE_TYPES:
            raise ValueError(f"unknown coarse type {self.coarse_type!r}")


@dataclass(frozen=True)
class SchemaDescriptor:
    """Column names and coarse types inferred from a data file."""

    columns: tuple[ColumnInfo, ...]
    file_format: str  # csv or jsonl

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def render(self) -> str:
        cols = ", ".join(f"{c.name}: {c.coarse_type}" for c in self.columns)
        return f"{self.file_format} [{cols}]"
