"""End-to-end chain: notes -> transition matrix -> metric space -> barcodes."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .descriptors import LOG_BASE, barcode_stats
from .filtration import build_vr_filtration
from .graph import associate_undirected, digraph_from_adjacency, weight_metric
from .midi import NoteEvent
from .persistence import Barcode, compute_persistence
from .transitions import (
    DEFAULT_ACCENT_INDEX,
    DEFAULT_TAU,
    PITCH_CLASS_NAMES,
    RestMode,
    TransitionMatrix,
    transition_matrix,
)

__all__ = ["RunConfig", "TrackAnalysis", "matrix_barcodes", "analyze_track", "format_value"]


@dataclass(frozen=True)
class RunConfig:
    rest_mode: RestMode = RestMode.IGNORE
    accent_tau: float = DEFAULT_TAU
    accent_index: float = DEFAULT_ACCENT_INDEX
    use_raw_durations: bool = False
    zscore_pca: bool = False
    log_base_note: str = f"entropy uses natural log (base {LOG_BASE}), in nats"
    dispersion_variant: str = "norm"

    def __post_init__(self):
        object.__setattr__(self, "rest_mode", RestMode(self.rest_mode))
        if not self.accent_tau > 0:
            raise ValueError(f"accent_tau must be positive, got {self.accent_tau}")
        if not self.accent_index > 0:
            raise ValueError(f"accent_index must be positive, got {self.accent_index}")
        if self.dispersion_variant not in ("norm", "rms"):
            raise ValueError(f"unknown dispersion variant {self.dispersion_variant!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rest_mode"] = self.rest_mode.value
        return d


def matrix_barcodes(M) -> tuple[Barcode, Barcode]:
    """Barcodes of the transition graph whose adjacency matrix is ``M``.

    A matrix with no transitions at all carries no graph to analyse and
    yields two empty barcodes.
    """
    M = np.asarray(M, dtype=float)
    if not M.any():
        return Barcode(0), Barcode(1)
    labels = PITCH_CLASS_NAMES if len(M) == 12 else tuple(str(i) for i in range(len(M)))
    G = associate_undirected(digraph_from_adjacency(labels, M))
    return compute_persistence(build_vr_filtration(weight_metric(G), 2))


@dataclass(frozen=True)
class TrackAnalysis:
    track: int
    n_notes: int
    matrix: TransitionMatrix
    barcodes: tuple[Barcode, Barcode]
    stats: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "stats", tuple(barcode_stats(bc) for bc in self.barcodes))

    @property
    def empty(self) -> bool:
        return self.matrix.is_empty

    def to_dict(self) -> dict:
        return {
            "track": self.track,
            "n_notes": self.n_notes,
            "empty": self.empty,
            "barcodes": {
                str(bc.dimension): [[format_value(b), format_value(d)] for b, d in bc.intervals()]
                for bc in self.barcodes
            },
            "stats": {str(s.dimension): s.to_dict() for s in self.stats},
        }


def analyze_track(notes: Sequence[NoteEvent], config: RunConfig = RunConfig(), track: int = 0) -> TrackAnalysis:
    M = transition_matrix(
        notes,
        config.rest_mode,
        tau=config.accent_tau,
        accent_index=config.accent_index,
        raw_durations=config.use_raw_durations,
    )
    return TrackAnalysis(track, len(notes), M, matrix_barcodes(M.entries))


def format_value(x: float):
    """JSON/CSV-safe value: infinities become the literal string ``"inf"``."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x
