from __future__ import annotations

import itertools
import math
import random
from collections import Counter

import pytest

from govdag.core.types import (
    ColumnInfo,
    GovernanceContract,
    OperatorNode,
    Predicate,
    SchemaDescriptor,
    TaskCategory,
)
from govdag.errors import ManifestError, ProtocolError
from govdag.executor.codegen import build_codegen_prompt, extract_code_block, generate_code
from govdag.executor.library import OperatorCard, check_library, load_library
from govdag.executor.retrieval import retrieve_ops, score_cards, tokenize
from govdag.gateway.mock import MockBackend


def card(name: str, description: str, tags=(), category="filtering") -> OperatorCard:
    return OperatorCard(
        name=name,
        description=description,
        snippet="print('x')\n",
        category=TaskCategory(category),
        tags=tuple(tags),
    )


# -- library --


def test_bundled_library_loads_and_checks(seed_library):
    assert len(seed_library) == 12
    categories = Counter(c.category for c in seed_library)
    assert all(count == 2 for count in categories.values())
    assert check_library(__import__("govdag.bundled", fromlist=["seed_library_path"]).seed_library_path()) == []


def test_card_requires_description_and_snippet():
    with pytest.raises(ValueError):
        card("X", "")
    with pytest.raises(ValueError):
        OperatorCard(name="X", description="d", snippet="", category=TaskCategory.FILTERING)


def test_duplicate_card_names_rejected(tmp_path):
    import json

    for directory in ("one", "two"):
        d = tmp_path / directory
        d.mkdir()
        (d / "card.json").write_text(
            json.dumps({"name": "Same", "description": "d", "category": "filtering"}), encoding="utf-8"
        )
        (d / "snippet.py").write_text("pass\n", encoding="utf-8")
    with pytest.raises(ManifestError, match="duplicate card name"):
        load_library(tmp_path)


# -- retrieval --


def test_date_goal_ranks_date_card_first(seed_library):
    ranked = retrieve_ops("standardize date format to YYYY-MM-DD", seed_library, k=4)
    assert ranked[0].name == "Normalize Format"
    assert len(ranked) == 4


def test_k_larger_than_library_returns_all(seed_library):
    assert len(retrieve_ops("anything", seed_library, k=99)) == len(seed_library)


def test_zero_similarity_falls_back_to_name_order(seed_library):
    goal = "zzzz qqqq xxxx"
    assert not set(tokenize(goal)) & set(tokenize(" ".join(c.document for c in seed_library)))
    ranked = retrieve_ops(goal, seed_library, k=len(seed_library))
    assert [c.name for c in ranked] == sorted(c.name for c in seed_library)


def test_retrieval_requires_valid_args(seed_library):
    with pytest.raises(ValueError):
        retrieve_ops("goal", seed_library, k=0)
    with pytest.raises(ValueError):
        retrieve_ops("goal", [], k=1)


def test_retrieval_stable_under_library_permutation(seed_library):
    rng = random.Random(1)
    baseline = [c.name for c in retrieve_ops("filter blocked words from text", seed_library, k=6)]
    for _ in range(20):
        shuffled = list(seed_library)
        rng.shuffle(shuffled)
        assert [c.name for c in retrieve_ops("filter blocked words from text", shuffled, k=6)] == baseline


def _brute_rank(goal: str, library) -> list[str]:
    """Independent scorer: same weighting definition, direct dense vectors."""
    n = len(library)
    docs = {c.name: tokenize(c.document) for c in library}
    vocabulary = sorted(set(itertools.chain(tokenize(goal), *docs.values())))
    df = {term: sum(1 for tokens in docs.values() if term in tokens) for term in vocabulary}
    idf = {term: math.log((1 + n) / (1 + df[term])) + 1.0 for term in vocabulary}

    def vector(tokens):
        return [tokens.count(term) * idf[term] for term in vocabulary]

    def cosine(a, b):
        dot = sum(x * y for x, y in zip(a, b))
        na = math.sqrt(sum(x * x for x in a))
        nb = math.sqrt(sum(y * y for y in b))
        return dot / (na * nb) if na and nb else 0.0

    query = vector(tokenize(goal))
    scored = [(c.name, cosine(query, vector(docs[c.name]))) for c in library]
    return [name for name, _ in sorted(scored, key=lambda pair: (-round(pair[1], 12), pair[0]))]


def test_retrieval_agrees_with_brute_force(seed_library):
    goals = [
        "standardize date format to YYYY-MM-DD",
        "remove duplicate rows by key",
        "impute missing numeric values with the mean",
        "join two tables on a composite key",
        "assign sentiment labels to text records",
        "totally unrelated walrus content",
    ]
    for goal in goals:
        ours = [c.name for c, s in score_cards(goal, seed_library)]
        assert ours == _brute_rank(goal, seed_library)


# -- codegen --


def _node() -> OperatorNode:
    return OperatorNode(
        id="impute-1",
        abstract_op="Impute Missing Values",
        params={"columns": ["age"]},
        contract=GovernanceContract(
            pre=(Predicate.column_exists("age"),),
            post=(Predicate.no_nulls("age"),),
        ),
    )


SCHEMA = SchemaDescriptor(columns=(ColumnInfo("age", "integer"),), file_format="csv")
SAMPLES = [{"age": str(i)} for i in range(8)]


def test_prompt_contains_contract_schema_and_capped_samples(seed_library):
    prompt = build_codegen_prompt(_node(), seed_library[:4], SCHEMA, SAMPLES)
    assert "assert column 'age' has no null/empty values" in prompt
    assert "csv [age: integer]" in prompt
    assert prompt.count('{"age"') == 5  # at most five sample rows
    assert prompt.count("### ") == 4  # one block per exemplar


def test_prompt_exemplars_in_retrieval_order(seed_library):
    exemplars = seed_library[:3]
    prompt = build_codegen_prompt(_node(), exemplars, SCHEMA, SAMPLES)
    positions = [prompt.index(f"### {c.name}") for c in exemplars]
    assert positions == sorted(positions)


def test_prompt_omits_exemplar_section_when_empty():
    prompt = build_codegen_prompt(_node(), [], SCHEMA, SAMPLES)
    assert "Reference operators" not in prompt
    assert "###" not in prompt


def test_prompt_is_deterministic(seed_library):
    first = build_codegen_prompt(_node(), seed_library[:4], SCHEMA, SAMPLES)
    second = build_codegen_prompt(_node(), seed_library[:4], SCHEMA, SAMPLES)
    assert first == second


def test_extract_code_block():
    assert extract_code_block("hi\n```python\nx = 1\n```\nbye") == "x = 1\n"
    assert extract_code_block("```\ny = 2\n```") == "y = 2\n"
    assert extract_code_block("no fence") is None


def test_generate_code_reasks_then_fails():
    calls = []

    def reply(prompt: str) -> str:
        calls.append(prompt)
        return "sorry, no code"

    with pytest.raises(ProtocolError):
        generate_code("prompt", MockBackend(reply), node_id="n1")
    assert len(calls) == 3


def test_generate_code_recovers_on_reask():
    state = {"count": 0}

    def reply(prompt: str) -> str:
        state["count"] += 1
        if state["count"] == 1:
            return "oops"
        return "```python\nprint('ok')\n```"

    artifact = generate_code("prompt", MockBackend(reply), node_id="n1", provenance="free")
    assert artifact.source == "print('ok')\n"
    assert artifact.provenance == "free"
    assert artifact.prompt_tokens > 0
