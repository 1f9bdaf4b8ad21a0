"""Partitioning nodes into maximal reciprocal pointer chains.

Nodes ``u`` and ``v`` are joined by a reciprocal pointer when ``u`` is the
predecessor-tree parent of ``v`` and ``v`` is the successor-tree parent of
``u``. Maximal runs of such links are node-disjoint, cover every node and
correspond one-to-one with the distinct cascading via-paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import Graph
from .spt import ShortestPathTree


@dataclass(frozen=True, eq=False)
class Partition:
    """Chains stored head (nearest the source) to tail; ``chain_of[v]`` indexes ``chains``."""

    chains: list
    chain_of: list

    def __len__(self):
        return len(self.chains)

    def chain_set(self) -> frozenset:
        return frozenset(tuple(c) for c in self.chains)

    def sizes(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for c in self.chains:
            hist[len(c)] = hist.get(len(c), 0) + 1
        return dict(sorted(hist.items()))

    def to_json(self) -> dict:
        return {"chains": [list(c) for c in self.chains]}

    @classmethod
    def from_chains(cls, chains: Iterable[Sequence[int]], node_count: int) -> "Partition":
        chains = [tuple(c) for c in chains]
        chain_of = [-1] * node_count
        for i, c in enumerate(chains):
            for v in c:
                if chain_of[v] != -1:
                    raise ValueError(f"node {v} appears in two chains")
                chain_of[v] = i
        if -1 in chain_of:
            raise ValueError("chains do not cover every node")
        return cls(chains, chain_of)


def _check_pair(g_beta: ShortestPathTree, g_phi: ShortestPathTree):
    if len(g_beta) != len(g_phi):
        raise ValueError("trees cover different node counts")


def is_reciprocal(g_beta: ShortestPathTree, g_phi: ShortestPathTree, u: int, v: int) -> bool:
    """True when ``u -> v`` is a reciprocal pointer (``u`` before ``v``)."""
    return u >= 0 and v >= 0 and g_beta.parent[v] == u and g_phi.parent[u] == v


def partition_rpc(g_beta: ShortestPathTree, g_phi: ShortestPathTree, s: int, t: int,
                  order: Optional[Iterable[int]] = None) -> Partition:
    """Grow one maximal chain per unvisited node, O(|V|).

    ``order`` is the outer-loop visiting order (ascending ids by default);
    the resulting set of chains does not depend on it.
    """
    _check_pair(g_beta, g_phi)
    bp, fp = g_beta.parent, g_phi.parent
    n = len(bp)
    visited = bytearray(n)
    chains = []
    chain_of = [-1] * n
    for v in (range(n) if order is None else order):
        if visited[v]:
            continue
        visited[v] = 1
        head = []
        x = v
        while x != s:
            w = bp[x]
            if w < 0 or fp[w] != x:
                break
            x = w
            visited[x] = 1
            head.append(x)
        tail = []
        x = v
        while x != t:
            y = fp[x]
            if y < 0 or bp[y] != x:
                break
            x = y
            visited[x] = 1
            tail.append(x)
        head.reverse()
        chain = tuple(head + [v] + tail)
        idx = len(chains)
        for x in chain:
            chain_of[x] = idx
        chains.append(chain)
    return Partition(chains, chain_of)


class _UnionFind:
    def __init__(self, size: int):
        self.parents = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while root != self.parents[root]:
            root = self.parents[root]
        while x != root:
            self.parents[x], x = root, self.parents[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parents[rb] = ra


def partition_via_components(g_beta: ShortestPathTree, g_phi: ShortestPathTree) -> Partition:
    """Connected components of the undirected reciprocal-pointer graph.

    Each component is then laid out head to tail by following successor
    pointers from the member whose predecessor link is not reciprocal.
    Chains are listed by their smallest member id.
    """
    _check_pair(g_beta, g_phi)
    n = len(g_beta)
    uf = _UnionFind(n)
    for v in range(n):
        w = g_phi.parent[v]
        if is_reciprocal(g_beta, g_phi, v, w):
            uf.union(v, w)
    members: dict[int, list[int]] = {}
    for v in range(n):
        members.setdefault(uf.find(v), []).append(v)
    chains = []
    for comp in sorted(members.values(), key=lambda c: c[0]):
        in_comp = set(comp)
        heads = [v for v in comp if not (g_beta.parent[v] in in_comp and is_reciprocal(g_beta, g_phi, g_beta.parent[v], v))]
        if len(heads) != 1:
            raise AssertionError("reciprocal component is not a simple chain")
        chain = [heads[0]]
        while len(chain) < len(comp):
            chain.append(g_phi.parent[chain[-1]])
        chains.append(tuple(chain))
    return Partition.from_chains(chains, n)


def partition_disjoint_plateau(g_beta: ShortestPathTree, g_phi: ShortestPathTree, s: int, t: int,
                               via_costs: Sequence[float], visit_order: Sequence[int],
                               graph: Optional[Graph] = None) -> Partition:
    """The order-dependent plateau grouping, kept for comparison with :func:`partition_rpc`.

    A chain grows backwards from its seed while the candidate predecessor is
    unvisited and has the same via-cost, then forwards under the same test.
    Without ``graph`` the only candidate is the tree parent. With ``graph``
    any unvisited in-neighbour (backwards) or out-neighbour (forwards) of
    equal via-cost qualifies, the earliest in ``visit_order`` winning.
    """
    _check_pair(g_beta, g_phi)
    n = len(g_beta)
    if sorted(visit_order) != list(range(n)):
        raise ValueError("visit_order must be a permutation of the nodes")
    rank = [0] * n
    for i, v in enumerate(visit_order):
        rank[v] = i
    visited = bytearray(n)

    def pick(x, candidates):
        best = None
        for w in candidates:
            if w >= 0 and w != x and not visited[w] and via_costs[w] == via_costs[x]:
                if best is None or rank[w] < rank[best]:
                    best = w
        return best

    if graph is None:
        back = lambda x: (g_beta.parent[x],)
        fwd = lambda x: (g_phi.parent[x],)
    else:
        back = lambda x: (w for w, _ in graph.predecessors(x))
        fwd = lambda x: (w for w, _ in graph.successors(x))

    chains = []
    for v in visit_order:
        if visited[v]:
            continue
        visited[v] = 1
        head, tail = [], []
        x = v
        while x != s:
            w = pick(x, back(x))
            if w is None:
                break
            visited[w] = 1
            head.append(w)
            x = w
        x = v
        while x != t:
            y = pick(x, fwd(x))
            if y is None:
                break
            visited[y] = 1
            tail.append(y)
            x = y
        head.reverse()
        chains.append(tuple(head + [v] + tail))
    return Partition.from_chains(chains, n)
