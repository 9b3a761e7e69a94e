"""Per-work feature vectors, PCA projection and corpus dispersion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .descriptors import barcode_stats
from .persistence import Barcode

__all__ = [
    "N_INSTRUMENTS",
    "FEATURE_NAMES",
    "WorkDescriptor",
    "CorpusProjection",
    "work_descriptor",
    "pca_2d",
    "dispersion",
]

N_INSTRUMENTS = 4
FEATURE_NAMES = tuple(
    f"{stat}{inst}_{dim}"
    for inst in range(1, N_INSTRUMENTS + 1)
    for dim in (0, 1)
    for stat in ("m", "sd", "e")
)


@dataclass(frozen=True, eq=False)
class WorkDescriptor:
    """24 features ordered instrument-major, then dimension, then (mean, sd, entropy)."""

    work_id: str
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if v.shape != (len(FEATURE_NAMES),):
            raise ValueError(f"descriptor must have {len(FEATURE_NAMES)} entries, got {v.size}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values.tolist()))


@dataclass(frozen=True, eq=False)
class CorpusProjection:
    coords: np.ndarray  # (n_works, 2)
    explained_variance: np.ndarray  # (2,), descending
    component_loadings: np.ndarray  # (2, n_features), orthonormal rows
    total_variance: float


def work_descriptor(barcodes: Sequence[tuple[Barcode, Barcode]], work_id: str = "") -> WorkDescriptor:
    """Stack the statistics of four ``(dim-0, dim-1)`` barcode pairs in score order."""
    if len(barcodes) != N_INSTRUMENTS:
        raise ValueError(f"expected {N_INSTRUMENTS} instruments, got {len(barcodes)}")
    values = []
    for bc0, bc1 in barcodes:
        if bc0.dimension != 0 or bc1.dimension != 1:
            raise ValueError("each instrument needs a (dimension-0, dimension-1) barcode pair")
        values.extend(barcode_stats(bc0).triple())
        values.extend(barcode_stats(bc1).triple())
    return WorkDescriptor(work_id, np.array(values))


def _as_matrix(points) -> np.ndarray:
    if isinstance(points, (list, tuple)) and points and isinstance(points[0], WorkDescriptor):
        points = [p.values for p in points]
    X = np.asarray(points, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"points must form a 2-D array, got shape {X.shape}")
    return X


def pca_2d(points, zscore: bool = False) -> CorpusProjection:
    """Project points onto their first two principal components.

    Data are centred but not rescaled unless ``zscore`` is set (constant
    features are then left at zero). Components are eigenvectors of the
    sample covariance; each is signed so that its largest-magnitude
    loading is positive.
    """
    X = _as_matrix(points)
    if X.shape[0] < 3:
        raise ValueError(f"PCA needs at least 3 points, got {X.shape[0]}")
    Xc = X - X.mean(axis=0)
    if zscore:
        sd = Xc.std(axis=0, ddof=1)
        Xc = np.divide(Xc, sd, out=np.zeros_like(Xc), where=sd > 0)
    C = Xc.T @ Xc / (X.shape[0] - 1)
    total = float(np.trace(C))
    if total <= 0:
        raise ValueError("degenerate corpus: zero total variance")
    evals, evecs = np.linalg.eigh(C)
    order = np.argsort(evals)[::-1][:2]
    evals = np.clip(evals[order], 0.0, None)
    W = evecs[:, order].T.copy()
    for row in W:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1
    return CorpusProjection(Xc @ W.T, evals, W, total)


def dispersion(points, variant: str = "norm") -> float:
    """Spread of a group of points around their centroid.

    ``variant="norm"`` (default) is ``sqrt(sum_i |x_i - mean| / (l - 1))`` with
    unsquared Euclidean norms, so it scales like the square root of the
    data. ``variant="rms"`` squares the norms (root-mean-square distance
    with an ``l - 1`` divisor) and scales linearly.
    """
    X = _as_matrix(points)
    l = X.shape[0]
    if l < 2:
        raise ValueError(f"dispersion needs at least 2 points, got {l}")
    # centre relative to the first point so constant data gives exactly 0
    Y = X - X[0]
    norms = np.linalg.norm(Y - Y.mean(axis=0), axis=1)
    if variant == "norm":
        return math.sqrt(math.fsum(norms) / (l - 1))
    if variant == "rms":
        return math.sqrt(math.fsum(norms**2) / (l - 1))
    raise ValueError(f"unknown dispersion variant {variant!r}")
