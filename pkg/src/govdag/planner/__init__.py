from govdag.planner.contracts import (
    REPAIR_PRIORITY,
    REPAIR_REGISTRY,
    ContractedOp,
    ContractViolation,
    check_chain,
    entails,
    extract_contracts,
    insert_repairs,
    plan_chain,
    schema_facts,
    synthesize_dag,
)
from govdag.planner.grounding import GroundedIntent, ground_intent

__all__ = [
    "REPAIR_PRIORITY",
    "REPAIR_REGISTRY",
    "ContractViolation",
    "ContractedOp",
    "GroundedIntent",
    "check_chain",
    "entails",
    "extract_contracts",
    "ground_intent",
    "insert_repairs",
    "plan_chain",
    "schema_facts",
    "synthesize_dag",
]
