"""Vietoris-Rips filtrations truncated at dimension 2."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .graph import FiniteMetricSpace

__all__ = ["Simplex", "Filtration", "build_vr_filtration"]

#: A simplex is a strictly increasing tuple of point indices.
Simplex = tuple[int, ...]

MAX_DIM = 2


@dataclass(frozen=True, eq=False)
class Filtration:
    """Simplices of dimension <= 2 in filtration order, with their values.

    Stored column-wise: ``vertices`` is an ``(N, 3)`` integer array padded
    with ``-1``, ``values`` the matching filtration values. Large Rips
    complexes have hundreds of thousands of simplices, which is why this is
    not a list of small objects; :attr:`entries` gives the tuple view.
    """

    vertices: np.ndarray
    values: np.ndarray
    n_points: int

    def __post_init__(self):
        V = np.array(self.vertices, dtype=np.int64, copy=True).reshape(-1, 3)
        vals = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if len(V) != len(vals):
            raise ValueError("vertices and values differ in length")
        V.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_entries(
        cls, entries: Iterable[tuple[Sequence[int], float]], n_points: int | None = None
    ) -> "Filtration":
        """Build from ``(simplex, value)`` pairs given in filtration order."""
        rows, vals = [], []
        for simplex, value in entries:
            s = tuple(int(v) for v in simplex)
            if not 1 <= len(s) <= MAX_DIM + 1:
                raise ValueError(f"simplex {s} has unsupported dimension")
            if any(a >= b for a, b in zip(s, s[1:])):
                raise ValueError(f"simplex {s} is not strictly increasing")
            rows.append(s + (-1,) * (3 - len(s)))
            vals.append(float(value))
        if n_points is None:
            n_points = 1 + max((max(r) for r in rows), default=-1)
        return cls(np.array(rows, dtype=np.int64).reshape(-1, 3), np.array(vals), n_points)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dims(self) -> np.ndarray:
        return (self.vertices >= 0).sum(axis=1) - 1

    @property
    def entries(self) -> list[tuple[Simplex, float]]:
        return list(iter(self))

    def __iter__(self) -> Iterator[tuple[Simplex, float]]:
        for row, v in zip(self.vertices.tolist(), self.values.tolist()):
            yield tuple(x for x in row if x >= 0), v

    def count(self, dim: int) -> int:
        return int((self.dims == dim).sum())


def build_vr_filtration(M: FiniteMetricSpace, max_simplex_dim: int = 2) -> Filtration:
    """Rips filtration of ``M`` with simplices up to ``max_simplex_dim``.

    Every simplex enters at the largest pairwise distance among its
    vertices. Simplices spanning an infinite distance are left out, which
    caps the filtration at the largest finite distance. Ties are broken by
    dimension, then lexicographically, so faces always precede cofaces and
    the order is reproducible.
    """
    if max_simplex_dim not in (1, 2):
        raise ValueError(f"max_simplex_dim must be 1 or 2, got {max_simplex_dim}")
    if not isinstance(M, FiniteMetricSpace):
        M = FiniteMetricSpace(tuple(str(i) for i in range(len(M))), M)
    D = M.dist
    n = M.n_points

    iu, ju = np.triu_indices(n, k=1)
    ev = D[iu, ju]
    finite = np.isfinite(ev)
    iu, ju, ev = iu[finite], ju[finite], ev[finite]

    blocks_v = [np.column_stack([np.arange(n), np.full(n, -1), np.full(n, -1)])]
    blocks_val = [np.zeros(n)]
    blocks_v.append(np.column_stack([iu, ju, np.full(len(iu), -1)]))
    blocks_val.append(ev)

    if max_simplex_dim == 2 and n >= 3:
        tri_v, tri_val = _triangles(D)
        blocks_v.append(tri_v)
        blocks_val.append(tri_val)

    V = np.concatenate(blocks_v).astype(np.int64)
    vals = np.concatenate(blocks_val)
    dims = (V >= 0).sum(axis=1) - 1
    # np.lexsort: last key is primary
    order = np.lexsort((V[:, 2], V[:, 1], V[:, 0], dims, vals))
    return Filtration(V[order], vals[order], n)


def _triangles(D: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(D)
    rows, vals = [], []
    for i in range(n - 2):
        # pairs (j, k) with i < j < k
        j, k = np.triu_indices(n - i - 1, k=1)
        j = j + i + 1
        k = k + i + 1
        tv = np.maximum(np.maximum(D[i, j], D[i, k]), D[j, k])
        ok = np.isfinite(tv)
        if ok.any():
            rows.append(np.column_stack([np.full(ok.sum(), i), j[ok], k[ok]]))
            vals.append(tv[ok])
    if not rows:
        return np.empty((0, 3), dtype=np.int64), np.empty(0)
    return np.concatenate(rows), np.concatenate(vals)
