"""Orthogonality graphs on the vertex set {v_0..v_{m-1}, w_0..w_{m-1}}.

Vertices are stored as integers: ``v_i`` is ``i`` and ``w_i`` is ``m + i``.
Edges are sorted pairs ``(a, b)`` with ``a < b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from upb.errors import DimensionError, DomainError
from upb.numerics import DEFAULT_TOL, Tolerances, as_vector

__all__ = [
    "OrthGraph",
    "complete_graph",
    "graph_D",
    "graph_C",
    "graph_C_layer",
    "graph_Y",
    "graph_X",
    "union",
    "complement",
    "is_complete",
    "orthogonality_graph_of",
]


@dataclass(frozen=True)
class OrthGraph:
    m: int
    edges: frozenset

    def __post_init__(self):
        n = 2 * self.m
        if self.m < 1:
            raise DomainError("graph needs at least one v/w pair")
        for a, b in self.edges:
            if not (0 <= a < b < n):
                raise DomainError(f"invalid edge {(a, b)} for {n} vertices")

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[tuple[int, int]]) -> "OrthGraph":
        canon = set()
        for a, b in edges:
            if a == b:
                raise DomainError("loops are not allowed")
            canon.add((min(a, b), max(a, b)))
        return cls(m, frozenset(canon))

    @property
    def n(self) -> int:
        return 2 * self.m

    def v(self, i: int) -> int:
        return i % self.m

    def w(self, i: int) -> int:
        return self.m + i % self.m

    def label(self, vertex: int) -> str:
        return f"v{vertex}" if vertex < self.m else f"w{vertex - self.m}"

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def degree(self, vertex: int) -> int:
        return sum(1 for e in self.edges if vertex in e)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def labeled_edges(self) -> list[tuple[str, str]]:
        return [(self.label(a), self.label(b)) for a, b in self.edge_list()]

    def to_dot(self, name: str | None = None) -> str:
        head = f"graph {name} {{" if name else "graph {"
        body = "".join(f'\n  "{a}" -- "{b}";' for a, b in self.labeled_edges())
        return f"{head}{body}\n}}\n"

    def __len__(self):
        return len(self.edges)


def complete_graph(m: int) -> OrthGraph:
    return OrthGraph(m, frozenset(combinations(range(2 * m), 2)))


def _cliques_on_both_sides(m: int) -> set:
    edges = set(combinations(range(m), 2))
    edges |= {(m + a, m + b) for a, b in combinations(range(m), 2)}
    return edges


def _band(q: int, offsets: Iterable[int]) -> set:
    offsets = list(offsets)
    return {(i, q + (i + ell) % q) for i in range(q) for ell in offsets}


def _check_db(d: int, b: int):
    if b < 0 or d < 2 * b + 4:
        raise DomainError(f"need b >= 0 and d >= 2b + 4, got d={d}, b={b}")


def graph_D(d: int, b: int) -> OrthGraph:
    """Two cliques on the v's and w's plus ``v_i -- w_j`` for (j-i) mod (d-b) in 0..b."""
    _check_db(d, b)
    q = d - b
    return OrthGraph(q, frozenset(_cliques_on_both_sides(q) | _band(q, range(b + 1))))


def graph_C(d: int, b: int) -> OrthGraph:
    """Complement of :func:`graph_D`: ``v_i -- w_j`` for b < (j-i) mod (d-b)."""
    _check_db(d, b)
    q = d - b
    return OrthGraph(q, frozenset(_band(q, range(b + 1, q))))


def graph_C_layer(d: int, b: int, r: int, s: int) -> OrthGraph:
    """The r-regular band ``v_i -- w_j`` with s <= (j-i) mod (d-b) < s + r."""
    q = d - b
    if b < 0 or q < 2:
        raise DomainError(f"need b >= 0 and d - b >= 2, got d={d}, b={b}")
    if r < 1 or s < 1 or s + r > q:
        raise DomainError(f"need r, s >= 1 and s + r <= d - b, got r={r}, s={s}, d-b={q}")
    return OrthGraph(q, frozenset(_band(q, range(s, s + r))))


def _check_k(k: int):
    if k < 1:
        raise DomainError("k must be >= 1")


def graph_Y(k: int) -> OrthGraph:
    """Prism graph on 4k+4 vertices: two (2k+2)-cycles joined by rungs v_i -- w_i."""
    _check_k(k)
    m = 2 * k + 2
    edges = set()
    for i in range(m):
        j = (i + 1) % m
        edges.add((min(i, j), max(i, j)))
        edges.add((m + min(i, j), m + max(i, j)))
        edges.add((i, m + i))
    return OrthGraph(m, frozenset(edges))


def graph_X(k: int) -> OrthGraph:
    """Complement of the prism graph :func:`graph_Y`."""
    return complement(graph_Y(k))


def complement(g: OrthGraph) -> OrthGraph:
    return OrthGraph(g.m, frozenset(combinations(range(g.n), 2)) - g.edges)


def union(*graphs: OrthGraph) -> OrthGraph:
    if not graphs:
        raise DimensionError("union of no graphs")
    m = graphs[0].m
    if any(g.m != m for g in graphs):
        raise DimensionError("graphs have different vertex counts")
    edges = frozenset().union(*(g.edges for g in graphs))
    return OrthGraph(m, edges)


def is_complete(g: OrthGraph) -> bool:
    return len(g.edges) == g.n * (g.n - 1) // 2


def orthogonality_graph_of(vectors: Sequence, tol: Tolerances = DEFAULT_TOL) -> OrthGraph:
    """Edge between two vectors iff |<a|b>| <= orth_tol * |a| |b|.

    The first half of ``vectors`` become v_0.., the second half w_0...
    """
    vecs = [as_vector(v) for v in vectors]
    if not vecs or len(vecs) % 2:
        raise DimensionError("need a non-empty, even number of vectors")
    if len({v.size for v in vecs}) != 1:
        raise DimensionError("vectors have different lengths")
    mat = np.column_stack(vecs)
    gram = np.abs(mat.conj().T @ mat)
    norms = np.linalg.norm(mat, axis=0)
    scale = np.outer(norms, norms)
    n = len(vecs)
    edges = [(a, b) for a, b in combinations(range(n), 2) if gram[a, b] <= tol.orth_tol * scale[a, b]]
    return OrthGraph(n // 2, frozenset(edges))
