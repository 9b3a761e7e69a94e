"""Summary statistics of a barcode: mean, standard deviation and entropy of bar lengths.

Mean and standard deviation use finite bars only. Entropy uses every bar,
with infinite deaths replaced by one more than the largest finite death.
Entropy is in nats.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .persistence import Barcode

__all__ = [
    "BarcodeStats",
    "LOG_BASE",
    "persistent_mean",
    "persistent_sd",
    "persistent_entropy",
    "barcode_stats",
]

LOG_BASE = "e"


def _finite_lengths(bc: Barcode) -> list[float]:
    return [b.length for b in bc.finite]


def persistent_mean(bc: Barcode) -> float:
    """Mean length of the finite bars; 0.0 when there are none."""
    lengths = _finite_lengths(bc)
    if not lengths:
        return 0.0
    return math.fsum(lengths) / len(lengths)


def persistent_sd(bc: Barcode) -> float:
    """Sample standard deviation (divisor ``n - 1``) of finite bar lengths.

    Zero for fewer than two finite bars.
    """
    lengths = _finite_lengths(bc)
    if len(lengths) < 2:
        return 0.0
    m = math.fsum(lengths) / len(lengths)
    return math.sqrt(math.fsum((x - m) ** 2 for x in lengths) / (len(lengths) - 1))


def persistent_entropy(bc: Barcode) -> float:
    """Shannon entropy (nats) of the normalised bar lengths.

    Infinite deaths are replaced by ``m + 1`` where ``m`` is the largest
    finite death; if every bar is infinite ``m`` is taken as 0.

    >>> round(persistent_entropy(Barcode.from_intervals(0, [(0, 2), (0, math.inf)])), 4)
    0.673
    """
    if len(bc) == 0:
        raise ValueError("entropy of an empty barcode is undefined")
    finite_deaths = [b.death for b in bc.finite]
    cap = (max(finite_deaths) if finite_deaths else 0.0) + 1.0
    lengths = [(cap if b.is_infinite else b.death) - b.birth for b in bc]
    if min(lengths) <= 0:
        raise ValueError(f"an infinite bar is born after the substituted death {cap}")
    total = math.fsum(lengths)
    h = 0.0
    for x in lengths:
        p = x / total
        h -= p * math.log(p)
    return max(h, 0.0)


@dataclass(frozen=True)
class BarcodeStats:
    mean: float
    sd: float
    entropy: float
    dimension: int
    finite_bar_count: int
    infinite_bar_count: int

    @property
    def empty(self) -> bool:
        return self.finite_bar_count + self.infinite_bar_count == 0

    @property
    def no_finite_bars(self) -> bool:
        return self.finite_bar_count == 0

    def triple(self) -> tuple[float, float, float]:
        return (self.mean, self.sd, self.entropy)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(empty=self.empty, no_finite_bars=self.no_finite_bars, log_base=LOG_BASE)
        return d


def barcode_stats(bc: Barcode) -> BarcodeStats:
    """All three statistics; an empty barcode gives ``(0, 0, 0)``."""
    n_inf = len(bc.infinite)
    n_fin = len(bc) - n_inf
    entropy = persistent_entropy(bc) if len(bc) else 0.0
    return BarcodeStats(persistent_mean(bc), persistent_sd(bc), entropy, bc.dimension, n_fin, n_inf)
