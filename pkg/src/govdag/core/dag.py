"""Structural validation and deterministic topological ordering for GovDags."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from govdag.core.types import GovDag


@dataclass(frozen=True)
class StructuralError:
    """Base class for structural findings; returned, never raised."""

    def describe(self) -> str:  # pragma: no cover - overridden
        return "structural error"


@dataclass(frozen=True)
class DuplicateNodeId(StructuralError):
    node_id: str

    def describe(self) -> str:
        return f"duplicate node id '{self.node_id}'"


@dataclass(frozen=True)
class DanglingEdge(StructuralError):
    edge: tuple[str, str]
    missing_id: str

    def describe(self) -> str:
        return f"edge {self.edge} references unknown node '{self.missing_id}'"


@dataclass(frozen=True)
class CycleError(StructuralError):
    members: tuple[str, ...]

    def describe(self) -> str:
        return f"cycle through nodes {', '.join(self.members)}"


def validate_dag(dag: GovDag) -> list[StructuralError]:
    """Return every structural defect; an empty list means the graph is a
    well-formed DAG (unique ids, resolvable edges, acyclic)."""
    errors: list[StructuralError] = []
    ids: set[str] = set()
    for node in dag.nodes:
        if node.id in ids:
            errors.append(DuplicateNodeId(node.id))
        ids.add(node.id)

    usable_edges = []
    for edge in dag.edges:
        src, dst = edge
        dangling = False
        for endpoint in (src, dst):
            if endpoint not in ids:
                errors.append(DanglingEdge(edge, endpoint))
                dangling = True
        if not dangling:
            usable_edges.append(edge)

    # Kahn's algorithm over the resolvable edges; leftover nodes form cycles.
    indegree = {node_id: 0 for node_id in ids}
    successors: dict[str, list[str]] = {node_id: [] for node_id in ids}
    for src, dst in usable_edges:
        indegree[dst] += 1
        successors[src].append(dst)
    ready = [node_id for node_id, deg in indegree.items() if deg == 0]
    visited = 0
    while ready:
        current = ready.pop()
        visited += 1
        for nxt in successors[current]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                ready.append(nxt)
    if visited != len(ids):
        members = tuple(sorted(node_id for node_id, deg in indegree.items() if deg > 0))
        errors.append(CycleError(members))
    return errors


def topo_order(dag: GovDag) -> list[str]:
    """Topological order of node ids, ties broken by ascending id.

    Rejects graphs that fail validate_dag.
    """
    errors = validate_dag(dag)
    if errors:
        raise ValueError("; ".join(e.describe() for e in errors))

    indegree = {node.id: 0 for node in dag.nodes}
    successors: dict[str, list[str]] = {node.id: [] for node in dag.nodes}
    for src, dst in dag.edges:
        indegree[dst] += 1
        successors[src].append(dst)

    heap = [node_id for node_id, deg in indegree.items() if deg == 0]
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        current = heapq.heappop(heap)
        order.append(current)
        for nxt in sorted(successors[current]):
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                heapq.heappush(heap, nxt)
    return order
