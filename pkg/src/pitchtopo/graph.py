"""Weighted graphs and the shortest-path metric built from them.

A weighted digraph is turned into an undirected graph by inserting one
label vertex per directed edge; the inverse-weight shortest-path distance
on that undirected graph is an extended metric (pairs in different
components sit at ``math.inf``).

Infinity is the IEEE ``inf`` value throughout, never a large finite
sentinel, so ``np.isfinite`` cleanly separates the two cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "WeightedDigraph",
    "WeightedUndirectedGraph",
    "FiniteMetricSpace",
    "digraph_from_adjacency",
    "associate_undirected",
    "weight_metric",
]


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class WeightedDigraph:
    """Directed graph with positive edge weights; loops allowed.

    ``edges`` holds ``(source, target, weight)`` triples with at most one
    edge per ordered pair.
    """

    vertex_labels: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        labels = tuple(str(v) for v in self.vertex_labels)
        edges = tuple((int(a), int(b), float(w)) for a, b, w in self.edges)
        object.__setattr__(self, "vertex_labels", labels)
        object.__setattr__(self, "edges", edges)
        n = len(labels)
        seen = set()
        for a, b, w in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) has an endpoint outside [0, {n})")
            if not w > 0 or not np.isfinite(w):
                raise ValueError(f"edge ({a}, {b}) has non-positive weight {w}")
            if (a, b) in seen:
                raise ValueError(f"duplicate directed edge ({a}, {b})")
            seen.add((a, b))

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_labels)

    @property
    def loops(self) -> list[tuple[int, int, float]]:
        return [e for e in self.edges if e[0] == e[1]]

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n_vertices, self.n_vertices))
        for a, b, w in self.edges:
            A[a, b] = w
        return A


@dataclass(frozen=True)
class WeightedUndirectedGraph:
    """Simple undirected graph with positive weights.

    Edges are stored canonically as ``(i, j, weight)`` with ``i < j``.
    """

    vertex_labels: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        labels = tuple(str(v) for v in self.vertex_labels)
        n = len(labels)
        canon = []
        seen = set()
        for a, b, w in self.edges:
            a, b, w = int(a), int(b), float(w)
            if a == b:
                raise ValueError(f"loop at vertex {a} in a simple graph")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge {{{a}, {b}}} has an endpoint outside [0, {n})")
            if not w > 0 or not np.isfinite(w):
                raise ValueError(f"edge {{{a}, {b}}} has non-positive weight {w}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError(f"parallel edge {{{a}, {b}}}")
            seen.add(key)
            canon.append((key[0], key[1], w))
        object.__setattr__(self, "vertex_labels", labels)
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_labels)

    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labelled points with a symmetric extended distance matrix.

    Construction checks the zero diagonal, symmetry (exact), and
    non-negativity. The triangle inequality is not checked here since it is
    cubic in the number of points; see :meth:`triangle_violations`.
    """

    point_labels: tuple[str, ...]
    dist: np.ndarray

    def __post_init__(self):
        D = _frozen(self.dist)
        labels = tuple(str(p) for p in self.point_labels)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {D.shape}")
        if D.shape[0] != len(labels):
            raise ValueError(f"{len(labels)} labels for {D.shape[0]} points")
        if np.isnan(D).any():
            raise ValueError("distance matrix contains NaN")
        if (D < 0).any():
            raise ValueError("distance matrix has negative entries")
        if (np.diag(D) != 0).any():
            raise ValueError("distance matrix has a nonzero diagonal")
        if not np.array_equal(D, D.T):
            i, j = np.argwhere(D != D.T)[0]
            raise ValueError(f"distance matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "dist", D)
        object.__setattr__(self, "point_labels", labels)

    @property
    def n_points(self) -> int:
        return len(self.point_labels)

    def triangle_violations(self, slack: float = 1e-9) -> list[tuple[int, int, int]]:
        """Triples ``(i, j, k)`` with all terms finite and d(i,k) > d(i,j) + d(j,k) + slack."""
        D = self.dist
        via = D[:, :, None] + D[None, :, :]  # via[i, j, k] = d(i,j) + d(j,k)
        direct = D[:, None, :]
        bad = np.isfinite(via) & np.isfinite(direct) & (direct > via + slack)
        return [tuple(int(x) for x in t) for t in np.argwhere(bad)]


def digraph_from_adjacency(labels: Sequence[str], A) -> WeightedDigraph:
    """Read a weighted digraph off its adjacency matrix; zero entries mean no edge."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {A.shape}")
    if len(labels) != A.shape[0]:
        raise ValueError(f"{len(labels)} labels for a {A.shape[0]}x{A.shape[0]} matrix")
    if np.isnan(A).any() or (A < 0).any():
        raise ValueError("adjacency matrix has negative or NaN entries")
    edges = [(int(i), int(j), float(A[i, j])) for i, j in zip(*np.nonzero(A > 0))]
    return WeightedDigraph(tuple(labels), tuple(edges))


def associate_undirected(G: WeightedDigraph) -> WeightedUndirectedGraph:
    """Split every directed edge ``(a, b)`` with a label vertex ``v_ab``.

    A non-loop edge of weight ``w`` becomes two undirected edges
    ``{a, v_ab}`` and ``{v_ab, b}`` of weight ``w/2``; a loop ``(a, a)``
    becomes the single edge ``{a, v_aa}`` of weight ``w``. Label vertices
    are appended after the original vertices, in edge order, and are named
    ``"src->tgt"``.

    >>> G = WeightedDigraph(("a", "b"), ((0, 1, 0.5),))
    >>> associate_undirected(G).edges
    ((0, 2, 0.25), (1, 2, 0.25))
    """
    labels = list(G.vertex_labels)
    edges = []
    for a, b, w in G.edges:
        v = len(labels)
        labels.append(f"{G.vertex_labels[a]}->{G.vertex_labels[b]}")
        if a == b:
            edges.append((a, v, w))
        else:
            edges.append((a, v, w / 2))
            edges.append((b, v, w / 2))
    return WeightedUndirectedGraph(tuple(labels), tuple(edges))


def weight_metric(G: WeightedUndirectedGraph) -> FiniteMetricSpace:
    """All-pairs shortest paths with edge length ``1 / weight``.

    Floyd-Warshall on a dense matrix; vertex counts here stay in the low
    hundreds.
    """
    n = G.n_vertices
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    for a, b, w in G.edges:
        D[a, b] = D[b, a] = 1.0 / w
    for k in range(n):
        np.minimum(D, D[:, k, None] + D[None, k, :], out=D)
    return FiniteMetricSpace(G.vertex_labels, D)
