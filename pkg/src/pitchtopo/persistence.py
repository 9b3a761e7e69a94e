"""Persistent homology over Z/2 in dimensions 0 and 1.

Standard column reduction of the boundary matrix in filtration order.
Columns are Python ints used as bit sets (bit ``r`` = the face of rank
``r`` within its dimension), so adding two columns mod 2 is a single XOR
and the lowest nonzero entry is ``bit_length() - 1``. Filtration values
never enter the algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .filtration import Filtration

__all__ = [
    "Bar",
    "Barcode",
    "FiltrationOrderError",
    "persistence_pairs",
    "compute_persistence",
]


class FiltrationOrderError(ValueError):
    """Raised when a filtration lists a simplex before one of its faces."""

    def __init__(self, index: int, reason: str):
        self.index = index
        super().__init__(f"filtration entry {index}: {reason}")


@dataclass(frozen=True, order=True)
class Bar:
    birth: float
    death: float
    dimension: int

    def __post_init__(self):
        if not self.birth < self.death:
            raise ValueError(f"bar [{self.birth}, {self.death}) is empty")
        if self.dimension not in (0, 1):
            raise ValueError(f"unsupported homology dimension {self.dimension}")

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)

    @property
    def length(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class Barcode:
    """Multiset of bars of a single homology dimension, sorted."""

    dimension: int
    bars: tuple[Bar, ...] = ()

    def __post_init__(self):
        bars = tuple(sorted(self.bars, key=lambda b: (b.birth, b.death)))
        for b in bars:
            if b.dimension != self.dimension:
                raise ValueError(f"dimension-{b.dimension} bar in a dimension-{self.dimension} barcode")
        object.__setattr__(self, "bars", bars)

    @classmethod
    def from_intervals(cls, dimension: int, intervals: Iterable[tuple[float, float]]) -> "Barcode":
        """``Barcode.from_intervals(0, [(0, 1), (0, math.inf)])``"""
        return cls(dimension, tuple(Bar(float(b), float(d), dimension) for b, d in intervals))

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    @property
    def finite(self) -> list[Bar]:
        return [b for b in self.bars if not b.is_infinite]

    @property
    def infinite(self) -> list[Bar]:
        return [b for b in self.bars if b.is_infinite]

    def intervals(self) -> list[tuple[float, float]]:
        return [(b.birth, b.death) for b in self.bars]

    def scaled(self, factor: float) -> "Barcode":
        return Barcode.from_intervals(self.dimension, [(b * factor, d * factor) for b, d in self.intervals()])

    def count_alive(self, t: float) -> int:
        """Number of bars with ``birth <= t < death``."""
        return sum(1 for b in self.bars if b.birth <= t < b.death)


def _index_faces(F: Filtration):
    """Validate face order and return per-dimension positions and face ranks.

    Returns ``(vertex_pos, edge_pos, edge_cols, tri_pos, tri_cols)`` where
    the ``*_cols`` arrays hold, for each simplex, the within-dimension ranks
    of its codimension-1 faces.
    """
    V = F.vertices
    vals = F.values
    N = len(vals)
    n = F.n_points
    dims = F.dims
    viol = np.zeros(N, dtype=bool)
    reasons = {}

    if N == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e, np.empty((0, 2), np.int64), e, np.empty((0, 3), np.int64)

    if (V >= n).any():
        idx = int(np.argmax((V >= n).any(axis=1)))
        raise FiltrationOrderError(idx, f"vertex index out of range for {n} points")

    dec = np.flatnonzero(np.diff(vals) < 0)
    if len(dec):
        viol[dec + 1] = True
        reasons.setdefault("values", int(dec[0] + 1))

    pos = np.arange(N)
    vertex_pos = pos[dims == 0]
    vrank = np.full(n, -1, dtype=np.int64)
    vfirst = np.full(n, N, dtype=np.int64)
    vids = V[vertex_pos, 0]
    # duplicates: keep first occurrence, flag later ones
    _, first_idx = np.unique(vids, return_index=True)
    dup = np.ones(len(vids), dtype=bool)
    dup[first_idx] = False
    viol[vertex_pos[dup]] = True
    keep = ~dup
    vrank[vids[keep]] = np.arange(len(vids))[keep]
    vfirst[vids[keep]] = vertex_pos[keep]

    edge_pos = pos[dims == 1]
    ev = V[edge_pos, :2]
    viol[edge_pos] |= (vfirst[ev[:, 0]] > edge_pos) | (vfirst[ev[:, 1]] > edge_pos)
    edge_cols = np.column_stack([vrank[ev[:, 0]], vrank[ev[:, 1]]])
    erank = np.full((n, n), -1, dtype=np.int64)
    efirst = np.full((n, n), N, dtype=np.int64)
    flat = ev[:, 0] * n + ev[:, 1]
    _, first_idx = np.unique(flat, return_index=True)
    dup = np.ones(len(flat), dtype=bool)
    dup[first_idx] = False
    viol[edge_pos[dup]] = True
    keep = ~dup
    erank[ev[keep, 0], ev[keep, 1]] = np.arange(len(ev))[keep]
    efirst[ev[keep, 0], ev[keep, 1]] = edge_pos[keep]

    tri_pos = pos[dims == 2]
    tv = V[tri_pos]
    faces = [(0, 1), (0, 2), (1, 2)]
    tri_cols = np.empty((len(tri_pos), 3), dtype=np.int64)
    for c, (a, b) in enumerate(faces):
        viol[tri_pos] |= efirst[tv[:, a], tv[:, b]] > tri_pos
        tri_cols[:, c] = erank[tv[:, a], tv[:, b]]
    if len(tri_pos):
        tflat = (tv[:, 0] * n + tv[:, 1]) * n + tv[:, 2]
        _, first_idx = np.unique(tflat, return_index=True)
        dup = np.ones(len(tflat), dtype=bool)
        dup[first_idx] = False
        viol[tri_pos[dup]] = True

    if viol.any():
        idx = int(np.argmax(viol))
        if reasons.get("values") == idx:
            raise FiltrationOrderError(idx, "filtration value decreases")
        raise FiltrationOrderError(idx, "simplex is duplicated or precedes one of its faces")
    return vertex_pos, edge_pos, edge_cols, tri_pos, tri_cols


def _reduce(columns: np.ndarray, stop_after: int | None = None) -> list[tuple[int, int]]:
    """Reduce boundary columns; return ``(low_rank, column_rank)`` pivot pairs."""
    pivots: dict[int, int] = {}
    pairs = []
    for c, faces in enumerate(columns.tolist()):
        col = 0
        for f in faces:
            col ^= 1 << f
        while col:
            low = col.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                pairs.append((low, c))
                break
            col ^= other
        if stop_after is not None and len(pairs) >= stop_after:
            break
    return pairs


def persistence_pairs(F: Filtration) -> list[tuple[int, int, int | None]]:
    """Raw persistence pairs as filtration positions, zero-length pairs included.

    Each item is ``(dimension, birth_position, death_position)`` with
    ``death_position = None`` for essential classes. Dimension-1 classes
    are only reported up to what the 2-simplices in ``F`` can kill.
    """
    vertex_pos, edge_pos, edge_cols, tri_pos, tri_cols = _index_faces(F)

    h0 = _reduce(edge_cols)
    killed_vertex = {v: e for v, e in h0}
    negative_edges = {e for _, e in h0}
    n_positive = len(edge_pos) - len(negative_edges)

    # every positive edge is either killed by a triangle or essential; once
    # all are killed the remaining triangles only create 2-cycles
    h1 = _reduce(tri_cols, stop_after=n_positive) if n_positive else []
    killed_edge = {e: t for e, t in h1}

    out: list[tuple[int, int, int | None]] = []
    for r, p in enumerate(vertex_pos.tolist()):
        e = killed_vertex.get(r)
        out.append((0, p, None if e is None else int(edge_pos[e])))
    for r, p in enumerate(edge_pos.tolist()):
        if r in negative_edges:
            continue
        t = killed_edge.get(r)
        out.append((1, p, None if t is None else int(tri_pos[t])))
    return out


def compute_persistence(F: Filtration) -> tuple[Barcode, Barcode]:
    """Dimension-0 and dimension-1 barcodes of ``F``.

    Classes alive at the end of the filtration get an infinite death.
    Zero-length pairs (birth value equal to death value) are dropped.
    """
    vals = F.values
    bars: dict[int, list[Bar]] = {0: [], 1: []}
    for dim, b, d in persistence_pairs(F):
        birth = float(vals[b])
        death = math.inf if d is None else float(vals[d])
        if birth < death:
            bars[dim].append(Bar(birth, death, dim))
    return Barcode(0, tuple(bars[0])), Barcode(1, tuple(bars[1]))
