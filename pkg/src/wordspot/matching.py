"""Weighted Minkowski ranking of database words against a query vector.

The distance is sum_k w_k |a_k - b_k|^p raised to 1/p; the default p = 1
makes it a weighted city-block metric.  Because raw features live on wildly
different scales (DCT coefficients vs. 0/1 grid bits), columns are min-max
normalized with the database's stored extrema by default, which also bounds
every distance by 1 and makes the retrieval threshold an absolute fraction
of the distance range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from wordspot.features import FeatureVector
from wordspot.weighting import WeightVector

Ref = tuple[str, int]


@dataclass(frozen=True)
class MatchConfig:
    p: float = 1.0
    normalize: bool = True
    threshold: float = 0.05
    top_k: int | None = None

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("Minkowski exponent p must be >= 1")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        if self.top_k is not None and self.top_k < 0:
            raise ValueError("top_k must be non-negative")


DEFAULT_MATCH = MatchConfig()


@dataclass(frozen=True, eq=False)
class QueryResult:
    """Full ascending ranking plus the cutoff subset actually retrieved.

    Entries are ((doc_id, word_id), distance) pairs sorted by distance with
    ties broken by reference; references are unique.
    """

    entries: tuple[tuple[Ref, float], ...]
    retrieved: tuple[tuple[Ref, float], ...]

    def __post_init__(self) -> None:
        refs = [ref for ref, _ in self.entries]
        if len(set(refs)) != len(refs):
            raise ValueError("ranking contains duplicate references")
        for (_, a), (_, b) in zip(self.entries, self.entries[1:]):
            if b < a:
                raise ValueError("ranking is not sorted by distance")
        if self.entries and self.entries[0][1] < 0:
            raise ValueError("distances must be non-negative")

    def retrieved_refs(self) -> set[Ref]:
        return {ref for ref, _ in self.retrieved}


def _normalized(values: np.ndarray, col_min: np.ndarray, col_max: np.ndarray,
                clamp: bool) -> np.ndarray:
    span = col_max - col_min
    safe = np.where(span > 0, span, 1.0)
    out = (values - col_min) / safe
    out = np.where(span > 0, out, 0.0)
    if clamp:
        out = np.clip(out, 0.0, 1.0)
    return out


def weighted_distance(
    a: FeatureVector,
    b: FeatureVector,
    weights: WeightVector,
    cfg: MatchConfig = DEFAULT_MATCH,
) -> float:
    """Distance between two feature vectors under the weight vector.

    When ``cfg.normalize`` is on the caller is expected to pass vectors that
    are already column-normalized; ``rank_query`` does that with database
    statistics.
    """
    if a.values.shape != b.values.shape or a.values.shape[0] != weights.dim:
        raise ValueError("vector/weight dimensions do not match")
    return _distance_arrays(a.values, b.values, weights.weight, cfg.p)


def _distance_arrays(a: np.ndarray, b: np.ndarray, w: np.ndarray, p: float) -> float:
    diff = np.abs(a - b)
    if p == 1:
        return float(w @ diff)
    return float((w @ diff**p) ** (1.0 / p))


def _distance_matrix(rows: np.ndarray, q: np.ndarray, w: np.ndarray, p: float) -> np.ndarray:
    diff = np.abs(rows - q)
    if p == 1:
        return diff @ w
    return (diff**p @ w) ** (1.0 / p)


def rank_query(
    q: FeatureVector,
    db,
    weights: WeightVector,
    cfg: MatchConfig = DEFAULT_MATCH,
) -> QueryResult:
    """Rank every database word against the query, nearest first.

    With normalization on, database columns and the query are min-max scaled
    by the stored column statistics (the query clamped into [0, 1]); the
    retrieved subset holds entries with distance <= cfg.threshold, cut to
    cfg.top_k when set.
    """
    records = db.records
    if len(records) == 0:
        raise ValueError("cannot query an empty database")
    matrix = db.feature_matrix()
    query = q.values
    if query.shape[0] != weights.dim or matrix.shape[1] != weights.dim:
        raise ValueError("vector/weight dimensions do not match")
    if cfg.normalize:
        matrix = _normalized(matrix, db.col_min, db.col_max, clamp=False)
        query = _normalized(query, db.col_min, db.col_max, clamp=True)
    distances = _distance_matrix(matrix, query, weights.weight, cfg.p)
    order = sorted(
        range(len(records)),
        key=lambda i: (distances[i], records[i].doc_id, records[i].word_id),
    )
    entries = tuple(
        ((records[i].doc_id, records[i].word_id), float(distances[i])) for i in order
    )
    retrieved = [e for e in entries if e[1] <= cfg.threshold]
    if cfg.top_k is not None:
        retrieved = retrieved[: cfg.top_k]
    return QueryResult(entries=entries, retrieved=tuple(retrieved))
