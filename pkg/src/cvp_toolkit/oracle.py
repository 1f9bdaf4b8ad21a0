"""Exhaustive reference computations for small graphs.

Everything here is exponential on purpose and guarded by an
:class:`EnumerationBudget`; exceeding the budget raises instead of
truncating. None of it touches the Dijkstra code in :mod:`cvp_toolkit.spt`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .graph import Graph
from .ranking import ExplicitPath

INF = math.inf


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_nodes: int = 12
    max_hops: Optional[int] = None
    max_paths: int = 2_000_000

    def __post_init__(self):
        if self.max_nodes < 1 or self.max_paths < 1 or (self.max_hops is not None and self.max_hops < 1):
            raise ValueError("budget limits must be positive")

    def check_graph(self, graph: Graph):
        if graph.node_count > self.max_nodes:
            raise BudgetExceeded(f"graph has {graph.node_count} nodes, budget allows {self.max_nodes}")


DEFAULT_BUDGET = EnumerationBudget()


def _arc_lists(graph: Graph, reverse: bool = False):
    adj: list[dict[int, float]] = [dict() for _ in range(graph.node_count)]
    for u, v, c in graph.edges():
        if u == v:
            continue
        a, b = (v, u) if reverse else (u, v)
        if b not in adj[a] or c < adj[a][b]:
            adj[a][b] = c
    return [sorted(d.items()) for d in adj]


def _walk_simple(adj, start, budget: EnumerationBudget, visit):
    """DFS over every simple path leaving ``start``; ``visit(path, cost)`` sees each prefix."""
    max_hops = budget.max_hops if budget.max_hops is not None else len(adj)
    count = 0
    on_path = [False] * len(adj)
    path = [start]
    on_path[start] = True
    stack = [(iter(adj[start]), 0.0)]
    visit(path, 0.0)
    while stack:
        it, cost = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            on_path[path.pop()] = False
            continue
        v, c = step
        if on_path[v] or len(path) > max_hops:
            continue
        count += 1
        if count > budget.max_paths:
            raise BudgetExceeded(f"more than {budget.max_paths} simple paths")
        path.append(v)
        on_path[v] = True
        visit(path, cost + c)
        stack.append((iter(adj[v]), cost + c))


def enumerate_simple_paths(graph: Graph, s: int, t: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> list[ExplicitPath]:
    """Every simple ``s``-``t`` path with at most ``budget.max_hops`` edges."""
    budget.check_graph(graph)
    found: list[ExplicitPath] = []
    if s == t:
        return [ExplicitPath((s,), 0.0)]

    def visit(path, cost):
        if path[-1] == t:
            found.append(ExplicitPath(tuple(path), cost))

    _walk_simple(_arc_lists(graph), s, budget, visit)
    return found


def _min_simple_costs(graph: Graph, root: int, reverse: bool, budget: EnumerationBudget) -> list[float]:
    best = [INF] * graph.node_count

    def visit(path, cost):
        v = path[-1]
        if cost < best[v]:
            best[v] = cost

    _walk_simple(_arc_lists(graph, reverse), root, budget, visit)
    return best


def brute_force_via_costs(graph: Graph, s: int, t: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> list[float]:
    """For every node ``v``: cheapest simple ``s``->``v`` path plus cheapest simple ``v``->``t`` path."""
    budget.check_graph(graph)
    to_v = _min_simple_costs(graph, s, False, budget)
    from_v = _min_simple_costs(graph, t, True, budget)
    return [a + b for a, b in zip(to_v, from_v)]


def brute_force_via_cost(graph: Graph, s: int, t: int, v: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> float:
    return brute_force_via_costs(graph, s, t, budget)[v]


def brute_force_ksp(graph: Graph, s: int, t: int, k: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> list[float]:
    """Sorted costs of the ``k`` cheapest simple ``s``-``t`` paths."""
    if k < 1:
        raise ValueError("k must be positive")
    costs = sorted(p.cost for p in enumerate_simple_paths(graph, s, t, budget))
    return costs[:k]


def enumerate_maximal_plateaus(graph: Graph, dist_s: Sequence[float], dist_t: Sequence[float],
                               budget: EnumerationBudget = DEFAULT_BUDGET, tight: bool = True) -> list[tuple]:
    """All maximal runs of adjacent nodes sharing one finite via-cost.

    With ``tight`` (the default) a step ``u -> v`` only counts when the
    via-path through ``u`` can continue along that edge, i.e.
    ``dist_s[u] + c(u, v) + dist_t[v]`` equals the common via-cost. Maximality
    is by node-set inclusion; one sequence is returned per maximal node set
    (the lexicographically smallest).
    """
    budget.check_graph(graph)
    n = graph.node_count
    via = [a + b for a, b in zip(dist_s, dist_t)]
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for u, nbrs in enumerate(_arc_lists(graph)):
        for v, c in nbrs:
            if via[u] == INF or via[u] != via[v]:
                continue
            if tight and dist_s[u] + c + dist_t[v] != via[u]:
                continue
            adj[u].append((v, c))
    by_set: dict[frozenset, tuple] = {}

    def visit(path, cost):
        key = frozenset(path)
        seq = tuple(path)
        if key not in by_set or seq < by_set[key]:
            by_set[key] = seq

    for v in range(n):
        if via[v] < INF:
            _walk_simple(adj, v, budget, visit)
    sets = list(by_set)
    maximal = [ns for ns in sets if not any(ns < other for other in sets)]
    return sorted(by_set[ns] for ns in maximal)
