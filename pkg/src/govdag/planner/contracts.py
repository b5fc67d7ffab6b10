"""Contract extraction, chain checking and minimal repair insertion.

Entailment between predicates is syntactic over the closed predicate
vocabulary: a pre-condition is discharged by an identical upstream fact,
by value_format(c, f) standing in for type_is(c, string), or by a larger
row_count_min bound. Nothing else is assumed (in particular, unique_key
does NOT imply no_nulls).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from govdag.core.dag import topo_order, validate_dag
from govdag.core.types import (
    GovDag,
    GovernanceContract,
    OperatorNode,
    Predicate,
    PredicateKind,
    SchemaDescriptor,
)
from govdag.errors import PlanningError, ProtocolError
from govdag.gateway.base import Backend, CompletionParams
from govdag.planner.grounding import GroundedIntent, ask_json
from govdag.planner.prompts import load_template

# Which abstract operator discharges a violated predicate kind.
REPAIR_REGISTRY: dict[PredicateKind, str] = {
    PredicateKind.TYPE_IS: "Cast Column Type",
    PredicateKind.NO_NULLS: "Impute Missing Values",
    PredicateKind.VALUE_FORMAT: "Normalize Format",
    PredicateKind.UNIQUE_KEY: "Deduplicate Rows",
}

# Insertion order when one edge needs several repairs: cast first, then
# impute, then normalize, then dedupe.
REPAIR_PRIORITY = (
    PredicateKind.TYPE_IS,
    PredicateKind.NO_NULLS,
    PredicateKind.VALUE_FORMAT,
    PredicateKind.UNIQUE_KEY,
)

CONTRACT_EXEMPLARS = """\
Goal: Standardize the date column to ISO format.
Schema: csv [id: integer, date: string]
Reply: [{"op": "Standardize Date Format", "params": {"column": "date"}, "pre": [{"kind": "column_exists", "column": "date"}, {"kind": "type_is", "column": "date", "type_name": "string"}], "post": [{"kind": "value_format", "column": "date", "format": "\\\\d{4}-\\\\d{2}-\\\\d{2}"}]}]"""


@dataclass(frozen=True)
class ContractedOp:
    """One planned abstract operator with its governance contract."""

    abstract_op: str
    contract: GovernanceContract
    params: dict[str, Any]


@dataclass(frozen=True)
class ContractViolation:
    """A downstream pre-condition not discharged by anything upstream.

    ``edge`` is (from_id, to_id); from_id is None when the consumer is a
    head node, i.e. the repair would go before the first operator.
    """

    edge: tuple[str | None, str]
    unmet: Predicate
    suggested_repair: str | None = None


def entails(fact: Predicate, pred: Predicate) -> bool:
    if fact == pred:
        return True
    if (
        fact.kind is PredicateKind.VALUE_FORMAT
        and pred.kind is PredicateKind.TYPE_IS
        and pred.column == fact.column
        and pred.type_name == "string"
    ):
        return True
    if fact.kind is PredicateKind.ROW_COUNT_MIN and pred.kind is PredicateKind.ROW_COUNT_MIN:
        assert fact.min_rows is not None and pred.min_rows is not None
        return pred.min_rows <= fact.min_rows
    return False


def is_entailed(pred: Predicate, facts: Iterable[Predicate]) -> bool:
    return any(entails(fact, pred) for fact in facts)


def schema_facts(schema: SchemaDescriptor) -> tuple[Predicate, ...]:
    """Seed facts for the pipeline source: existence and coarse type of
    every source column."""
    facts: list[Predicate] = []
    for column in schema.columns:
        facts.append(Predicate.column_exists(column.name))
        facts.append(Predicate.type_is(column.name, column.coarse_type))
    return tuple(facts)


def extract_contracts(
    intent: GroundedIntent,
    schema: SchemaDescriptor,
    gateway: Backend,
    samples: Sequence[dict[str, Any]] = (),
    params: CompletionParams | None = None,
) -> list[ContractedOp]:
    """Ask the gateway for the operator list with (pre, post) contracts.

    Each contract may reference only source-schema columns or columns
    introduced by an earlier operator's post-conditions; replies breaking
    that rule are re-asked, then rejected.
    """
    if not intent.feasible:
        raise PlanningError(f"cannot extract contracts from infeasible intent: {intent.infeasibility_reason}")
    template = load_template("contracts")
    sample_lines = "\n".join(json.dumps(r, ensure_ascii=False, sort_keys=True) for r in samples[:5])
    prompt = template.substitute(
        exemplars=CONTRACT_EXEMPLARS,
        objective=intent.normalized_goal,
        schema=schema.render(),
        samples=sample_lines,
    )
    reply, _, _ = ask_json(gateway, prompt, params)
    ops = _parse_contract_reply(reply)
    _check_column_scope(ops, schema)
    return ops


def _parse_contract_reply(reply: Any) -> list[ContractedOp]:
    if not isinstance(reply, list) or not reply:
        raise ProtocolError("contract reply must be a non-empty JSON array")
    ops = []
    for entry in reply:
        try:
            ops.append(
                ContractedOp(
                    abstract_op=str(entry["op"]),
                    params=dict(entry.get("params", {})),
                    contract=GovernanceContract(
                        pre=tuple(Predicate.from_obj(p) for p in entry.get("pre", ())),
                        post=tuple(Predicate.from_obj(p) for p in entry.get("post", ())),
                    ),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"bad contract entry {entry!r}: {exc}") from exc
    return ops


def _check_column_scope(ops: Sequence[ContractedOp], schema: SchemaDescriptor) -> None:
    available = set(schema.column_names)
    for op in ops:
        for pred in (*op.contract.pre, *op.contract.post):
            if pred.column is not None and pred.column not in available:
                # post predicates may introduce the column they guarantee
                if pred in op.contract.post:
                    continue
                raise ProtocolError(
                    f"operator '{op.abstract_op}' references unknown column '{pred.column}'"
                )
        for pred in op.contract.post:
            if pred.column is not None:
                available.add(pred.column)


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")


def synthesize_dag(contracted_ops: Sequence[ContractedOp]) -> GovDag:
    """Linear chain in list order; node ids follow `<op-slug>-<index>`."""
    if not contracted_ops:
        raise ValueError("cannot synthesize a DAG from zero operators")
    nodes = []
    for index, op in enumerate(contracted_ops, start=1):
        nodes.append(
            OperatorNode(
                id=f"{_slug(op.abstract_op)}-{index}",
                abstract_op=op.abstract_op,
                params=dict(op.params),
                contract=op.contract,
            )
        )
    edges = tuple((a.id, b.id) for a, b in zip(nodes, nodes[1:]))
    dag = GovDag(nodes=tuple(nodes), edges=edges)
    assert not validate_dag(dag)
    return dag


def _ancestors(dag: GovDag) -> dict[str, set[str]]:
    preds: dict[str, set[str]] = {node.id: set() for node in dag.nodes}
    for src, dst in dag.edges:
        preds[dst].add(src)
    result: dict[str, set[str]] = {}
    for node_id in topo_order(dag):
        anc: set[str] = set()
        for parent in preds[node_id]:
            anc.add(parent)
            anc |= result[parent]
        result[node_id] = anc
    return result


def check_chain(dag: GovDag, source_facts: Iterable[Predicate] = ()) -> list[ContractViolation]:
    """List every pre-condition not entailed by the source facts plus all
    upstream post-conditions."""
    if validate_dag(dag):
        raise ValueError("check_chain requires a structurally valid DAG")
    source = tuple(source_facts)
    ancestors = _ancestors(dag)
    immediate: dict[str, list[str]] = {node.id: [] for node in dag.nodes}
    for src, dst in dag.edges:
        immediate[dst].append(src)

    violations: list[ContractViolation] = []
    for node_id in topo_order(dag):
        node = dag.node(node_id)
        facts = list(source)
        for upstream_id in ancestors[node_id]:
            facts.extend(dag.node(upstream_id).contract.post)
        from_id = min(immediate[node_id]) if immediate[node_id] else None
        for pred in node.contract.pre:
            if not is_entailed(pred, facts):
                violations.append(
                    ContractViolation(
                        edge=(from_id, node_id),
                        unmet=pred,
                        suggested_repair=REPAIR_REGISTRY.get(pred.kind),
                    )
                )
    return violations


def _repair_params(kind: PredicateKind, preds: Sequence[Predicate]) -> dict[str, Any]:
    columns = sorted(p.column for p in preds if p.column is not None)
    params: dict[str, Any] = {"columns": columns}
    if kind is PredicateKind.TYPE_IS:
        params["types"] = {p.column: p.type_name for p in preds}
    elif kind is PredicateKind.VALUE_FORMAT:
        params["formats"] = {p.column: p.format for p in preds}
    elif kind is PredicateKind.UNIQUE_KEY:
        params["key"] = columns[0] if columns else None
    return params


def insert_repairs(dag: GovDag, violations: Sequence[ContractViolation]) -> GovDag:
    """Insert minimal repair nodes so that every listed violation is
    discharged; each inserted node carries repair=True and a post contract
    of exactly the predicates it repairs.

    Minimality needs two skips: a predicate already discharged by a repair
    inserted further upstream gets no second repair, and within one edge a
    predicate entailed by another predicate being repaired there (e.g.
    type_is(c, string) under a value_format repair) is folded in.
    """
    if not violations:
        return dag

    for violation in violations:
        if violation.unmet.kind not in REPAIR_REGISTRY:
            raise PlanningError(
                f"no repair operator registered for predicate: {violation.unmet.describe()}"
            )

    by_edge: dict[tuple[str | None, str], list[ContractViolation]] = {}
    for violation in violations:
        by_edge.setdefault(violation.edge, []).append(violation)

    position = {node_id: index for index, node_id in enumerate(topo_order(dag))}
    nodes = list(dag.nodes)
    edges = set(dag.edges)
    counter = 0
    for edge in sorted(by_edge, key=lambda e: (position[e[1]], e[0] or "")):
        src, dst = edge
        current = GovDag(nodes=tuple(nodes), edges=tuple(sorted(edges)))
        upstream_repair_facts = [
            pred
            for ancestor in _ancestors(current)[dst]
            if current.node(ancestor).repair
            for pred in current.node(ancestor).contract.post
        ]
        unmet = {
            v.unmet
            for v in by_edge[edge]
            if not is_entailed(v.unmet, upstream_repair_facts)
        }
        chain: list[OperatorNode] = []
        for kind in REPAIR_PRIORITY:
            preds = sorted(
                (
                    pred
                    for pred in unmet
                    if pred.kind is kind
                    and not any(entails(other, pred) for other in unmet if other != pred)
                ),
                key=lambda p: (p.column or "", str(p.format), str(p.type_name)),
            )
            if not preds:
                continue
            counter += 1
            op_name = REPAIR_REGISTRY[kind]
            chain.append(
                OperatorNode(
                    id=f"{_slug(op_name)}-r{counter}",
                    abstract_op=op_name,
                    params=_repair_params(kind, preds),
                    contract=GovernanceContract(pre=(), post=tuple(preds)),
                    repair=True,
                )
            )
        if not chain:
            continue
        nodes.extend(chain)
        if src is not None:
            edges.discard((src, dst))
            edges.add((src, chain[0].id))
        for a, b in zip(chain, chain[1:]):
            edges.add((a.id, b.id))
        edges.add((chain[-1].id, dst))

    repaired = GovDag(nodes=tuple(nodes), edges=tuple(sorted(edges)))
    assert not validate_dag(repaired)
    return repaired


def plan_chain(
    contracted_ops: Sequence[ContractedOp], source_facts: Iterable[Predicate] = ()
) -> tuple[GovDag, list[ContractViolation]]:
    """Synthesize, check and repair in one step; returns the repaired DAG
    plus the violations that were repaired."""
    dag = synthesize_dag(contracted_ops)
    violations = check_chain(dag, source_facts)
    if violations:
        dag = insert_repairs(dag, violations)
    return dag, violations
