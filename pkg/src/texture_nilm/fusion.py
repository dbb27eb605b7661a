"""Histogram fusion: summation, concatenation, elementwise product.

Both inputs are L1-normalized before combining and the result is normalized
again, so histograms coming from matrices with different interior counts are
commensurable and every feature vector is a probability vector.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .descriptors import HISTOGRAM_BINS, DescriptorHistogram
from .errors import DegenerateProduct, EmptyHistogram


class FusionStrategy(str, enum.Enum):
    SUM = "sum"
    CONCAT = "concat"
    MULT = "mult"


@dataclass
class FeatureVector:
    """Fused, L1-normalized feature representation of one event window."""

    values: np.ndarray
    strategy: FusionStrategy

    def __post_init__(self) -> None:
        self.strategy = FusionStrategy(self.strategy)
        self.values = np.asarray(self.values, dtype=np.float64)
        expected = 2 * HISTOGRAM_BINS if self.strategy is FusionStrategy.CONCAT else HISTOGRAM_BINS
        if self.values.shape != (expected,):
            raise ValueError(
                f"{self.strategy.value} vectors must have {expected} components, "
                f"got {self.values.shape}"
            )
        if self.values.min() < 0:
            raise ValueError("feature values must be non-negative")
        if abs(self.l1 - 1.0) > 1e-9:
            raise ValueError(f"feature vector must be L1-normalized, sum={self.l1!r}")

    @property
    def l1(self) -> float:
        return float(self.values.sum())


def _normalized(h: DescriptorHistogram) -> np.ndarray:
    if h.total == 0:
        raise EmptyHistogram(f"{h.kind} histogram has zero total mass")
    return np.asarray(h.bins, dtype=np.float64) / h.total


def fuse(
    h_lbp: DescriptorHistogram,
    h_wld: DescriptorHistogram,
    strategy: FusionStrategy | str,
) -> FeatureVector:
    """Combine an LBP and a WLD histogram into one feature vector.

    Summation and multiplication keep 256 components; concatenation appends
    the WLD histogram after the LBP one for 512. Multiplication of histograms
    with disjoint support would normalize the zero vector and is rejected.
    """
    strategy = FusionStrategy(strategy)
    a = _normalized(h_lbp)
    b = _normalized(h_wld)
    if strategy is FusionStrategy.SUM:
        v = a + b
    elif strategy is FusionStrategy.CONCAT:
        v = np.concatenate([a, b])
    else:
        v = a * b
        if not v.any():
            raise DegenerateProduct(
                "histograms have disjoint support; their product is all-zero"
            )
    return FeatureVector(v / v.sum(), strategy)
