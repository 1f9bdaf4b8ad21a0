"""Small named graphs used by the tests, the CLI demos and the README."""

from __future__ import annotations

from .graph import Graph

LETTERS = ["s", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "t"]
LETTER_ID = {name: i for i, name in enumerate(LETTERS)}

_LETTER_ARCS = [
    ("s", "b", 3), ("s", "c", 3), ("s", "d", 2),
    ("b", "d", 2), ("b", "e", 3),
    ("c", "d", 2), ("c", "f", 2), ("c", "g", 4),
    ("d", "h", 4), ("d", "g", 3), ("d", "e", 3),
    ("e", "h", 2), ("e", "k", 2),
    ("f", "g", 2), ("f", "i", 2),
    ("g", "i", 3), ("g", "h", 2), ("g", "j", 2),
    ("h", "j", 1), ("h", "k", 3),
    ("i", "j", 3), ("i", "l", 3),
    ("j", "k", 2), ("j", "l", 3), ("j", "m", 3), ("j", "t", 4),
    ("k", "m", 2),
    ("l", "t", 3),
    ("m", "t", 3),
]


def letter_graph() -> Graph:
    """14-node, 29-arc road-like example; ``s`` is node 0 and ``t`` node 13."""
    return Graph.from_edges(len(LETTERS), [(LETTER_ID[u], LETTER_ID[v], c) for u, v, c in _LETTER_ARCS])


def names(nodes) -> list[str]:
    return [LETTERS[v] for v in nodes]


def ids(text: str) -> list[int]:
    """``"s,d,g"`` or ``"sdg"`` -> node ids."""
    parts = text.split(",") if "," in text else list(text)
    return [LETTER_ID[p.strip()] for p in parts]


LOOP_NAMES = ["s", "u", "v", "t"]


def loop_graph() -> Graph:
    """``s -> u -> v -> u -> t`` with unit weights: the via-path through ``v``
    has to revisit ``u``."""
    return Graph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 1, 1), (1, 3, 1)])
