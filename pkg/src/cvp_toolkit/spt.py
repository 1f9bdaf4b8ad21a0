"""Predecessor/successor shortest path trees with cached costs and hop counts.

Dijkstra over a binary heap, O(|E| log |V|). Ties between equally cheap
parents are resolved by a fixed policy:

``"first"``
    keep the parent that was settled first (replace only on a strictly
    smaller distance);
``"last"``
    take the parent settled last among the equally cheap ones.

Among equal heap keys the lower node id is settled first, so both policies
are deterministic. The default CVP pipeline pairs a ``"first"`` predecessor
tree with a ``"last"`` successor tree (see :func:`cvp_trees`).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import Graph, GraphError

INF = math.inf
PREDECESSOR = "predecessor"
SUCCESSOR = "successor"
TIE_POLICIES = ("first", "last")
DEFAULT_TIES = ("first", "last")


@dataclass(frozen=True, eq=False)
class ShortestPathTree:
    """Parent pointers, path costs and hop counts for one root.

    ``parent[v]`` is ``-1`` for the root and for nodes the tree does not
    reach; those also have ``dist = inf`` and ``hops = -1``. In a
    predecessor tree ``parent[v]`` is the node before ``v`` on the path from
    the root; in a successor tree it is the node after ``v`` on the path
    to the root.
    """

    root: int
    orientation: str
    parent: list
    dist: list
    hops: list

    def __len__(self):
        return len(self.parent)

    def reachable(self, v: int) -> bool:
        return self.dist[v] < INF

    def path_to_root(self, v: int) -> list[int]:
        """Nodes from ``v`` following parent pointers up to the root."""
        if not self.reachable(v):
            raise GraphError(f"node {v} is not connected to the root {self.root}")
        out = [v]
        while v != self.root:
            v = self.parent[v]
            out.append(v)
        return out

    def to_json(self) -> dict:
        nodes = []
        for p, d, h in zip(self.parent, self.dist, self.hops):
            nodes.append({"parent": None if p < 0 else p,
                          "dist": None if d == INF else d,
                          "hops": None if h < 0 else h})
        return {"root": self.root, "orientation": self.orientation, "nodes": nodes}


def _dijkstra(n, adjacency, root, ties="first", banned_nodes=None, banned_arcs=None, stop_at=None):
    offsets, heads, costs = adjacency
    dist = [INF] * n
    parent = [-1] * n
    hops = [-1] * n
    done = bytearray(n)
    last = ties == "last"
    filtered = bool(banned_nodes) or bool(banned_arcs)
    dist[root] = 0.0
    hops[root] = 0
    heap = [(0.0, root)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if done[u]:
            continue
        done[u] = 1
        if u == stop_at:
            break
        hu = hops[u] + 1
        for i in range(offsets[u], offsets[u + 1]):
            v = heads[i]
            if done[v]:
                continue
            if filtered and (v in banned_nodes or (u, v) in banned_arcs):
                continue
            nd = d + costs[i]
            dv = dist[v]
            if nd < dv:
                dist[v] = nd
                parent[v] = u
                hops[v] = hu
                push(heap, (nd, v))
            elif last and nd == dv and parent[v] != u:
                parent[v] = u
                hops[v] = hu
    return dist, parent, hops


def compute_spt(graph: Graph, root: int, orientation: str = PREDECESSOR, ties: str = "first") -> ShortestPathTree:
    """Shortest path tree rooted at ``root``.

    A successor tree is the predecessor tree of the transposed graph, which
    here just means relaxing in-edges instead of out-edges.
    """
    if not 0 <= root < graph.node_count:
        raise GraphError(f"invalid root {root}")
    if orientation not in (PREDECESSOR, SUCCESSOR):
        raise ValueError(f"unknown orientation {orientation!r}")
    if ties not in TIE_POLICIES:
        raise ValueError(f"unknown tie policy {ties!r}")
    adjacency = graph.out_adjacency if orientation == PREDECESSOR else graph.in_adjacency
    dist, parent, hops = _dijkstra(graph.node_count, adjacency, root, ties)
    return ShortestPathTree(root, orientation, parent, dist, hops)


def cvp_trees(graph: Graph, source: int, target: int, ties=DEFAULT_TIES) -> tuple[ShortestPathTree, ShortestPathTree]:
    """The predecessor tree rooted at ``source`` and the successor tree rooted at ``target``."""
    if isinstance(ties, str):
        ties = (ties, ties)
    return (compute_spt(graph, source, PREDECESSOR, ties[0]),
            compute_spt(graph, target, SUCCESSOR, ties[1]))


def via_cost(trees: tuple[ShortestPathTree, ShortestPathTree], v: int) -> float:
    """Cost of the cheapest source -> ``v`` -> target walk."""
    g_beta, g_phi = trees
    return g_beta.dist[v] + g_phi.dist[v]


def via_costs(trees: tuple[ShortestPathTree, ShortestPathTree]) -> list[float]:
    g_beta, g_phi = trees
    return [a + b for a, b in zip(g_beta.dist, g_phi.dist)]


def shortest_path(graph: Graph, source: int, target: int, ties: str = "first",
                  banned_nodes: Optional[Iterable[int]] = None,
                  banned_arcs: Optional[Iterable[tuple[int, int]]] = None) -> Optional[list[int]]:
    """Node sequence of one shortest ``source``-``target`` path avoiding the banned
    nodes and arcs, or ``None``. Stops as soon as ``target`` is settled."""
    banned_nodes = set(banned_nodes or ())
    banned_arcs = set(banned_arcs or ())
    if source in banned_nodes or target in banned_nodes:
        return None
    dist, parent, _ = _dijkstra(graph.node_count, graph.out_adjacency, source, ties,
                                banned_nodes, banned_arcs, stop_at=target)
    if dist[target] == INF:
        return None
    path = [target]
    while path[-1] != source:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def check_tree(graph: Graph, tree: ShortestPathTree) -> list[str]:
    """Return descriptions of every violated tree invariant (empty when valid)."""
    problems = []
    forward = tree.orientation == PREDECESSOR
    arcs = graph.arc_costs
    r = tree.root
    if tree.dist[r] != 0 or tree.hops[r] != 0 or tree.parent[r] != -1:
        problems.append("root not initialised")
    for v in range(len(tree)):
        p = tree.parent[v]
        if v == r or p < 0:
            if v != r and tree.dist[v] < INF:
                problems.append(f"reachable node {v} has no parent")
            continue
        c = arcs.get((p, v) if forward else (v, p))
        if c is None:
            problems.append(f"parent of {v} is not adjacent")
            continue
        if tree.dist[v] != tree.dist[p] + c:
            problems.append(f"dist[{v}] inconsistent with parent")
        if tree.hops[v] != tree.hops[p] + 1:
            problems.append(f"hops[{v}] inconsistent with parent")
    for u, v, c in graph.edges():
        a, b = (u, v) if forward else (v, u)
        if tree.dist[a] + c < tree.dist[b]:
            problems.append(f"edge {u}->{v} still relaxes")
    for v in range(len(tree)):
        if tree.dist[v] == INF:
            continue
        seen = 0
        x = v
        while x != r:
            x = tree.parent[x]
            seen += 1
            if x < 0 or seen > len(tree):
                problems.append(f"parent chain from {v} does not reach the root")
                break
    return problems
