from govdag.core.dag import (
    CycleError,
    DanglingEdge,
    DuplicateNodeId,
    StructuralError,
    topo_order,
    validate_dag,
)
from govdag.core.manifest import (
    TaskPack,
    load_pack,
    load_task,
    load_task_pack,
    parse_manifest,
    serialize_manifest,
)
from govdag.core.types import (
    ColumnInfo,
    DagStep,
    EvaluatorBinding,
    EvaluatorKind,
    GovDag,
    GovernanceContract,
    OperatorNode,
    Predicate,
    PredicateKind,
    RunRecord,
    SchemaDescriptor,
    TaskCategory,
    TaskLevel,
    TaskSpec,
)

__all__ = [
    "ColumnInfo",
    "CycleError",
    "DagStep",
    "DanglingEdge",
    "DuplicateNodeId",
    "EvaluatorBinding",
    "EvaluatorKind",
    "GovDag",
    "GovernanceContract",
    "OperatorNode",
    "Predicate",
    "PredicateKind",
    "RunRecord",
    "SchemaDescriptor",
    "StructuralError",
    "TaskCategory",
    "TaskLevel",
    "TaskPack",
    "TaskSpec",
    "load_pack",
    "load_task",
    "load_task_pack",
    "parse_manifest",
    "serialize_manifest",
    "topo_order",
    "validate_dag",
]
