from __future__ import annotations

import json
import random

import pytest

from govdag.core.types import (
    ColumnInfo,
    GovDag,
    GovernanceContract,
    Predicate,
    SchemaDescriptor,
    TaskCategory,
    TaskLevel,
    TaskSpec,
)
from govdag.core.dag import topo_order, validate_dag
from govdag.errors import PlanningError, ProtocolError
from govdag.gateway.mock import MockBackend
from govdag.planner.contracts import (
    ContractedOp,
    check_chain,
    entails,
    extract_contracts,
    insert_repairs,
    schema_facts,
    synthesize_dag,
)
from govdag.planner.grounding import GroundedIntent, ground_intent, parse_json_reply

SCHEMA = SchemaDescriptor(
    columns=(ColumnInfo("id", "integer"), ColumnInfo("text", "string")),
    file_format="jsonl",
)
SAMPLES = [{"id": 1, "text": "hello"}]


def task(objective: str) -> TaskSpec:
    from govdag.core.types import EvaluatorBinding, EvaluatorKind

    return TaskSpec(
        id="t",
        level=TaskLevel.OPERATOR,
        category=TaskCategory.FILTERING,
        objective=objective,
        inputs=("data/noisy.jsonl",),
        ground_truth="data/gt.jsonl",
        evaluator=EvaluatorBinding(kind=EvaluatorKind.BUILTIN_FILTERING),
    )


def json_backend(obj) -> MockBackend:
    return MockBackend(lambda prompt: json.dumps(obj))


# -- grounding --


def test_ground_intent_feasible_with_valid_columns():
    backend = json_backend(
        {"feasible": True, "normalized_goal": "Filter bad rows.", "infeasibility_reason": None,
         "referenced_columns": ["text"]}
    )
    intent = ground_intent(task("filter profanity from text"), SCHEMA, SAMPLES, backend)
    assert intent.feasible
    assert intent.referenced_columns == ("text",)


def test_ground_intent_strips_hallucinated_columns():
    backend = json_backend(
        {"feasible": True, "normalized_goal": "g", "referenced_columns": ["text", "salary"]}
    )
    intent = ground_intent(task("clean text and salary"), SCHEMA, SAMPLES, backend)
    assert intent.feasible
    assert "salary" not in intent.referenced_columns


def test_ground_intent_absent_columns_force_infeasible():
    backend = json_backend(
        {"feasible": True, "normalized_goal": "impute salary", "referenced_columns": ["salary"]}
    )
    intent = ground_intent(task("impute the salary column"), SCHEMA, SAMPLES, backend)
    assert not intent.feasible
    assert "salary" in intent.infeasibility_reason


def test_ground_intent_empty_objective_short_circuits():
    backend = MockBackend(lambda prompt: pytest.fail("gateway must not be called"))
    intent = ground_intent(task(""), SCHEMA, SAMPLES, backend)
    assert not intent.feasible
    assert intent.infeasibility_reason == "empty objective"


def test_ground_intent_requires_samples():
    with pytest.raises(ValueError):
        ground_intent(task("x"), SCHEMA, [], MockBackend())


def test_unparseable_reply_reasks_then_fails():
    calls = []

    def reply(prompt: str) -> str:
        calls.append(prompt)
        return "not json at all"

    with pytest.raises(ProtocolError):
        ground_intent(task("filter text"), SCHEMA, SAMPLES, MockBackend(reply))
    assert len(calls) == 3  # initial ask + two re-asks
    assert "was not parseable" in calls[-1]


def test_parse_json_reply_handles_fences_and_prose():
    assert parse_json_reply('```json\n{"a": 1}\n```') == {"a": 1}
    assert parse_json_reply('Sure! Here you go: {"a": 1} hope that helps') == {"a": 1}
    assert parse_json_reply("[1, 2]") == [1, 2]
    with pytest.raises(ValueError):
        parse_json_reply("no json here")


def test_infeasible_intent_requires_reason():
    with pytest.raises(ValueError):
        GroundedIntent(normalized_goal="g", feasible=False)


# -- contract extraction --


def test_extract_contracts_rejects_infeasible_intent():
    intent = GroundedIntent(normalized_goal="g", feasible=False, infeasibility_reason="nope")
    with pytest.raises(PlanningError):
        extract_contracts(intent, SCHEMA, MockBackend())


def test_extract_contracts_parses_ops():
    intent = GroundedIntent(normalized_goal="standardize dates", feasible=True)
    reply = [
        {
            "op": "Standardize Date Format",
            "params": {"column": "text"},
            "pre": [{"kind": "column_exists", "column": "text"}],
            "post": [{"kind": "value_format", "column": "text", "format": r"\d{4}-\d{2}-\d{2}"}],
        }
    ]
    ops = extract_contracts(intent, SCHEMA, json_backend(reply))
    assert ops[0].abstract_op == "Standardize Date Format"
    assert ops[0].contract.pre[0] == Predicate.column_exists("text")


def test_extract_contracts_rejects_out_of_scope_columns():
    intent = GroundedIntent(normalized_goal="g", feasible=True)
    reply = [
        {"op": "X", "params": {}, "pre": [{"kind": "no_nulls", "column": "ghost"}], "post": []}
    ]
    with pytest.raises(ProtocolError, match="ghost"):
        extract_contracts(intent, SCHEMA, json_backend(reply))


def test_extract_contracts_allows_columns_introduced_upstream():
    intent = GroundedIntent(normalized_goal="g", feasible=True)
    reply = [
        {"op": "A", "params": {}, "pre": [], "post": [{"kind": "column_exists", "column": "label"}]},
        {"op": "B", "params": {}, "pre": [{"kind": "no_nulls", "column": "label"}], "post": []},
    ]
    ops = extract_contracts(intent, SCHEMA, json_backend(reply))
    assert len(ops) == 2


# -- dag synthesis --


def cop(name: str, pre=(), post=(), params=None) -> ContractedOp:
    return ContractedOp(
        abstract_op=name,
        contract=GovernanceContract(pre=tuple(pre), post=tuple(post)),
        params=params or {},
    )


def test_synthesize_single_and_chain():
    single = synthesize_dag([cop("Only Op")])
    assert len(single.nodes) == 1 and single.edges == ()
    chain = synthesize_dag([cop(f"Op {c}") for c in "abcd"])
    assert len(chain.nodes) == 4
    assert len(chain.edges) == 3
    assert topo_order(chain) == [n.id for n in chain.nodes]


def test_synthesize_duplicate_names_get_indexed_ids():
    dag = synthesize_dag([cop("Same Op"), cop("Same Op")])
    assert [n.id for n in dag.nodes] == ["same-op-1", "same-op-2"]


def test_synthesize_rejects_empty():
    with pytest.raises(ValueError):
        synthesize_dag([])


# -- entailment and chain checking --


def test_entailment_rules():
    vf = Predicate.value_format("date", r"\d{4}-\d{2}-\d{2}")
    assert entails(vf, Predicate.type_is("date", "string"))
    assert not entails(Predicate.unique_key("c"), Predicate.no_nulls("c"))
    assert entails(Predicate.row_count_min(10), Predicate.row_count_min(5))
    assert not entails(Predicate.row_count_min(5), Predicate.row_count_min(10))
    assert entails(vf, vf)


def test_check_chain_value_format_feeds_type_is():
    dag = synthesize_dag(
        [
            cop("Normalize", post=[Predicate.value_format("date", r"\d{4}-\d{2}-\d{2}")]),
            cop("Consume", pre=[Predicate.type_is("date", "string")]),
        ]
    )
    assert check_chain(dag) == []


def test_check_chain_reports_unmet_no_nulls_with_repair_hint():
    dag = synthesize_dag([cop("Consume", pre=[Predicate.no_nulls("age")])])
    violations = check_chain(dag)
    assert len(violations) == 1
    assert violations[0].unmet == Predicate.no_nulls("age")
    assert violations[0].suggested_repair == "Impute Missing Values"
    assert violations[0].edge == (None, dag.nodes[0].id)


def test_check_chain_empty_dag():
    assert check_chain(GovDag()) == []


def test_check_chain_uses_source_facts():
    dag = synthesize_dag([cop("Consume", pre=[Predicate.column_exists("id")])])
    assert check_chain(dag, schema_facts(SCHEMA)) == []


# -- repairs --


def test_insert_repairs_discharges_single_violation():
    dag = synthesize_dag(
        [cop("Produce"), cop("Consume", pre=[Predicate.no_nulls("age")])]
    )
    violations = check_chain(dag)
    repaired = insert_repairs(dag, violations)
    assert check_chain(repaired) == []
    inserted = [n for n in repaired.nodes if n.repair]
    assert len(inserted) == 1
    assert inserted[0].abstract_op == "Impute Missing Values"
    # inserted between producer and consumer
    order = topo_order(repaired)
    assert order.index("produce-1") < order.index(inserted[0].id) < order.index("consume-2")


def test_insert_repairs_zero_violations_is_identity():
    dag = synthesize_dag([cop("A"), cop("B")])
    assert insert_repairs(dag, []) is dag


def test_insert_repairs_orders_cast_before_impute():
    dag = synthesize_dag(
        [
            cop("Produce"),
            cop(
                "Consume",
                pre=[Predicate.no_nulls("age"), Predicate.type_is("age", "integer")],
            ),
        ]
    )
    repaired = insert_repairs(dag, check_chain(dag))
    assert check_chain(repaired) == []
    order = topo_order(repaired)
    repair_ops = [repaired.node(i).abstract_op for i in order if repaired.node(i).repair]
    assert repair_ops == ["Cast Column Type", "Impute Missing Values"]


def test_insert_repairs_unrepairable_predicate_is_error():
    dag = synthesize_dag([cop("Consume", pre=[Predicate.column_exists("ghost")])])
    violations = check_chain(dag)
    with pytest.raises(PlanningError, match="ghost"):
        insert_repairs(dag, violations)


def _splice_out(dag: GovDag, node_id: str) -> GovDag:
    preds = [src for src, dst in dag.edges if dst == node_id]
    succs = [dst for src, dst in dag.edges if src == node_id]
    edges = [e for e in dag.edges if node_id not in e]
    edges.extend((p, s) for p in preds for s in succs)
    return GovDag(
        nodes=tuple(n for n in dag.nodes if n.id != node_id),
        edges=tuple(sorted(set(edges))),
    )


REPAIRABLE = [
    Predicate.no_nulls("age"),
    Predicate.type_is("age", "integer"),
    Predicate.value_format("date", r"\d{4}-\d{2}-\d{2}"),
    Predicate.unique_key("id"),
    Predicate.no_nulls("income"),
    Predicate.type_is("date", "datetime"),
]


def random_chain(rng: random.Random) -> tuple[GovDag, list]:
    length = rng.randint(1, 6)
    ops = []
    for i in range(length):
        pre = rng.sample(REPAIRABLE, k=rng.randint(0, 3))
        post = rng.sample(REPAIRABLE, k=rng.randint(0, 2))
        ops.append(cop(f"Op {i}", pre=pre, post=post))
    dag = synthesize_dag(ops)
    return dag, check_chain(dag)


def test_repair_properties_on_random_chains():
    rng = random.Random(42)
    for _ in range(100):
        dag, violations = random_chain(rng)
        repaired = insert_repairs(dag, violations)
        assert validate_dag(repaired) == []
        assert check_chain(repaired) == []
        # a second pass inserts nothing
        again = insert_repairs(repaired, check_chain(repaired))
        assert again is repaired
        # minimality: removing any single repair node reintroduces a violation
        for node in repaired.nodes:
            if node.repair:
                assert check_chain(_splice_out(repaired, node.id)) != []
