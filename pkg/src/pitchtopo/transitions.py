"""Pitch-class transition probability matrices.

Each pair of consecutive notes contributes the product of their
(accent-transformed) durations to the cell ``(pc_from, pc_to)``; the matrix
is then normalised to sum to one. Rests between the two notes can be
ignored, used to drop the transition, or used to attenuate it.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .midi import NoteEvent

__all__ = [
    "PITCH_CLASS_NAMES",
    "RestMode",
    "TransitionMatrix",
    "durational_accent",
    "rest_factor",
    "transition_matrix",
]

PITCH_CLASS_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

DEFAULT_TAU = 0.5
DEFAULT_ACCENT_INDEX = 2.0
# gaps at or below this are MIDI quantisation jitter, not rests
REST_EPSILON = 1e-3


class RestMode(str, enum.Enum):
    IGNORE = "ignore"
    OMIT = "omit"
    WEIGHTED = "weighted"


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    entries: np.ndarray
    rest_mode: RestMode = RestMode.IGNORE

    def __post_init__(self):
        M = np.array(self.entries, dtype=float, copy=True)
        if M.shape != (12, 12):
            raise ValueError(f"transition matrix must be 12x12, got {M.shape}")
        if (M < 0).any():
            raise ValueError("transition matrix has negative entries")
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)
        object.__setattr__(self, "rest_mode", RestMode(self.rest_mode))

    @property
    def is_empty(self) -> bool:
        return not self.entries.any()

    def __getitem__(self, key):
        return self.entries[key]


def durational_accent(duration: float, tau: float = DEFAULT_TAU, index: float = DEFAULT_ACCENT_INDEX) -> float:
    """Saturating perceptual weight of a note duration in seconds.

    ``(1 - exp(-duration / tau)) ** index``; tends to 0 for very short
    notes and to 1 for long ones.

    >>> round(durational_accent(0.5), 4)
    0.3996
    """
    if not duration > 0:
        raise ValueError(f"duration must be positive, got {duration}")
    return (-math.expm1(-duration / tau)) ** index


def rest_factor(gap: float, uv: float) -> float:
    """Attenuation ``1 / (gap / uv + 1)`` for a transition across a rest."""
    return 1.0 / (gap / uv + 1.0)


def transition_matrix(
    notes: Sequence[NoteEvent],
    mode: RestMode | str = RestMode.IGNORE,
    *,
    tau: float = DEFAULT_TAU,
    accent_index: float = DEFAULT_ACCENT_INDEX,
    raw_durations: bool = False,
) -> TransitionMatrix:
    """Normalised 12x12 pitch-class transition matrix of a note stream.

    Notes are serialised by ``(onset, pitch)``, so chords turn into
    ascending pitch-to-pitch transitions with no gap. ``raw_durations``
    uses seconds instead of durational accents for the transition weights.
    """
    mode = RestMode(mode)
    seq = sorted(notes, key=lambda n: (n.onset, n.pitch))
    M = np.zeros((12, 12))
    if len(seq) < 2:
        warnings.warn(f"{len(seq)} note(s): no transitions, returning an all-zero matrix")
        return TransitionMatrix(M, mode)

    if raw_durations:
        weights = [n.duration for n in seq]
    else:
        weights = [durational_accent(n.duration, tau, accent_index) for n in seq]

    for prev, nxt, u, v in zip(seq, seq[1:], weights, weights[1:]):
        gap = nxt.onset - prev.offset
        if gap <= REST_EPSILON:
            gap = 0.0
        uv = u * v
        if mode is RestMode.OMIT and gap > 0:
            continue
        if mode is RestMode.WEIGHTED:
            uv *= rest_factor(gap, uv)
        M[prev.pitch_class, nxt.pitch_class] += uv

    total = M.sum()
    if total > 0:
        M /= total
    else:
        warnings.warn("every transition was removed; returning an all-zero matrix")
    return TransitionMatrix(M, mode)
