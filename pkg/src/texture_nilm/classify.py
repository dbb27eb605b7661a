"""Exact nearest-neighbor classification over feature vectors.

Distances are computed by brute-force scan, which at a few thousand vectors
of a few hundred components is fast, exact and bit-reproducible. Tie rules
are fully specified because accuracy figures depend on them: neighbors tied
at the k-th distance are taken in ascending training-item order, and vote
ties go to the lexicographically smallest label.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyTrainingSet, InvalidConfig
from .fusion import FeatureVector, FusionStrategy


class Metric(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"


class VoteWeighting(str, enum.Enum):
    UNIFORM = "uniform"
    INVERSE_DISTANCE = "inverse_distance"


_INVERSE_DISTANCE_FLOOR = 1e-12


@dataclass(frozen=True)
class KnnConfig:
    """k, distance metric and vote weighting. k=1 forces uniform weighting."""

    k: int = 1
    metric: Metric = Metric.EUCLIDEAN
    weighting: VoteWeighting = VoteWeighting.UNIFORM

    def __post_init__(self) -> None:
        object.__setattr__(self, "metric", Metric(self.metric))
        object.__setattr__(self, "weighting", VoteWeighting(self.weighting))
        if self.k < 1:
            raise InvalidConfig("k must be at least 1")
        if self.k == 1:
            object.__setattr__(self, "weighting", VoteWeighting.UNIFORM)


@dataclass
class LabeledDataset:
    """Feature vectors with labels, stored as one (n, d) matrix.

    ``strategy`` records the fusion strategy the vectors came from; it is None
    for single-descriptor datasets used in ablation runs.
    """

    vectors: np.ndarray
    labels: list[str]
    strategy: FusionStrategy | None = None

    def __post_init__(self) -> None:
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        self.labels = list(self.labels)
        if self.vectors.ndim != 2:
            raise ValueError("vectors must form a 2D (n, d) matrix")
        if self.vectors.shape[0] != len(self.labels):
            raise ValueError("one label per vector required")

    @classmethod
    def from_feature_vectors(
        cls, items: list[tuple[FeatureVector, str]]
    ) -> "LabeledDataset":
        if not items:
            raise ValueError("at least one item required")
        strategies = {fv.strategy for fv, _ in items}
        if len(strategies) != 1:
            raise ValueError("all feature vectors must share one fusion strategy")
        return cls(
            np.vstack([fv.values for fv, _ in items]),
            [label for _, label in items],
            strategies.pop(),
        )

    @property
    def class_set(self) -> list[str]:
        return sorted(set(self.labels))

    def __len__(self) -> int:
        return int(self.vectors.shape[0])


def _as_vector(query: FeatureVector | np.ndarray) -> np.ndarray:
    if isinstance(query, FeatureVector):
        return query.values
    return np.asarray(query, dtype=np.float64)


def _distances(train: np.ndarray, query: np.ndarray, metric: Metric) -> np.ndarray:
    if metric is Metric.EUCLIDEAN:
        diff = train - query
        return np.sqrt(np.sum(diff * diff, axis=1))
    qn = np.sqrt(np.dot(query, query))
    tn = np.sqrt(np.sum(train * train, axis=1))
    if qn == 0.0 or np.any(tn == 0.0):
        raise ValueError("cosine distance is undefined for zero-norm vectors")
    return 1.0 - (train @ query) / (tn * qn)


def predict(
    train: LabeledDataset, query: FeatureVector | np.ndarray, cfg: KnnConfig
) -> str:
    """Label of the (weighted) majority among the k nearest training vectors."""
    if len(train) == 0:
        raise EmptyTrainingSet("training set has no items")
    q = _as_vector(query)
    if q.shape != (train.vectors.shape[1],):
        raise DimensionMismatch(
            f"query has {q.shape} components, training vectors have "
            f"{train.vectors.shape[1]}"
        )
    d = _distances(train.vectors, q, cfg.metric)
    k = min(cfg.k, len(train))
    # stable sort keeps equal distances in ascending training-item order
    nearest = np.argsort(d, kind="stable")[:k]

    votes: dict[str, float] = {}
    for i in nearest:
        if cfg.weighting is VoteWeighting.UNIFORM:
            weight = 1.0
        else:
            weight = 1.0 / (d[i] + _INVERSE_DISTANCE_FLOOR)
        label = train.labels[i]
        votes[label] = votes.get(label, 0.0) + weight
    best = max(votes.values())
    return min(label for label, weight in votes.items() if weight == best)


def predict_batch(
    train: LabeledDataset,
    queries: np.ndarray | list[FeatureVector | np.ndarray],
    cfg: KnnConfig,
) -> list[str]:
    """Elementwise :func:`predict`; output order matches query order."""
    return [predict(train, q, cfg) for q in queries]
