"""Threshold-seeded k-means over (optionally weighted) feature vectors.

The cluster count is unknown up front, so a seeding pass invents it: the
first record founds cluster 1, and each later record joins the nearest
existing centroid within the distance threshold (updating it to the running
mean) or founds a new cluster.  Lloyd iterations then refine the result on
the full dataset.  Distances are the same weighted metric the retrieval
path uses; omitting the weight vector falls back to the uniform baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from wordspot.matching import DEFAULT_MATCH, MatchConfig, _distance_matrix, _normalized
from wordspot.store import FeatureDatabase
from wordspot.weighting import WeightVector, uniform_weights_for

MAX_LLOYD_ITERATIONS = 100
CENTROID_SHIFT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ClusterModel:
    """Fitted clustering: centroids live in the (normalized) feature space."""

    k: int
    centroids: np.ndarray
    assignment: np.ndarray
    threshold: float

    def __post_init__(self) -> None:
        centroids = np.asarray(self.centroids, dtype=np.float64).copy()
        assignment = np.asarray(self.assignment, dtype=np.int64).copy()
        if centroids.shape[0] != self.k:
            raise ValueError("centroid count must equal k")
        if assignment.min(initial=0) < 0 or assignment.max(initial=-1) >= self.k:
            raise ValueError("assignment indexes a missing cluster")
        centroids.setflags(write=False)
        assignment.setflags(write=False)
        object.__setattr__(self, "centroids", centroids)
        object.__setattr__(self, "assignment", assignment)


def _prepared(db: FeatureDatabase, weights: WeightVector | None, cfg: MatchConfig):
    if len(db) == 0:
        raise ValueError("cannot cluster an empty database")
    if weights is None:
        weights = uniform_weights_for(db)
    data = db.feature_matrix()
    if cfg.normalize:
        data = _normalized(data, db.col_min, db.col_max, clamp=False)
    return data, weights


def _distances_to(data: np.ndarray, centroid: np.ndarray, w: np.ndarray, p: float):
    return _distance_matrix(data, centroid, w, p)


def _nearest(data: np.ndarray, centroids: np.ndarray, w: np.ndarray, p: float):
    all_d = np.stack(
        [_distances_to(data, centroids[j], w, p) for j in range(len(centroids))],
        axis=1,
    )
    return all_d.argmin(axis=1), all_d


def _means(data: np.ndarray, assignment: np.ndarray, k: int, prev: np.ndarray,
           w: np.ndarray, p: float) -> np.ndarray:
    centroids = np.empty((k, data.shape[1]))
    empties = []
    for j in range(k):
        members = data[assignment == j]
        if len(members) == 0:
            empties.append(j)
            centroids[j] = prev[j]
        else:
            centroids[j] = members.mean(axis=0)
    for j in empties:
        # re-seed to the record farthest from its own centroid
        own = np.array(
            [_distance_matrix(data[i : i + 1], centroids[a], w, p)[0]
             if a != j else -math.inf
             for i, a in enumerate(assignment)]
        )
        centroids[j] = data[int(own.argmax())]
    return centroids


def seed_clusters(
    data: np.ndarray, threshold: float, w: np.ndarray, p: float
) -> tuple[np.ndarray, np.ndarray]:
    """The incremental seeding pass: (centroids, assignment).

    The first record founds cluster 0.  Every later record joins the
    nearest existing centroid whose distance is within the threshold, which
    then moves to the running mean of its members; otherwise the record
    founds a new cluster at itself.
    """
    centroids = [data[0].copy()]
    counts = [1]
    assignment = [0]
    for i in range(1, len(data)):
        record = data[i]
        dists = [
            _distance_matrix(record[None, :], c, w, p)[0] for c in centroids
        ]
        j = int(np.argmin(dists))
        if dists[j] <= threshold:
            assignment.append(j)
            counts[j] += 1
            centroids[j] += (record - centroids[j]) / counts[j]
        else:
            assignment.append(len(centroids))
            centroids.append(record.copy())
            counts.append(1)
    return np.array(centroids), np.array(assignment, dtype=np.int64)


def ik_means(
    db: FeatureDatabase,
    threshold: float,
    weights: WeightVector | None = None,
    cfg: MatchConfig = DEFAULT_MATCH,
) -> ClusterModel:
    """Seed clusters by distance threshold, then refine with Lloyd's steps.

    Seeding visits records in database order (see ``seed_clusters``).
    Refinement runs at most 100 iterations and stops when assignments are
    stable or no centroid coordinate moved more than 1e-9; clusters emptied
    along the way are re-seeded to the farthest record.
    """
    if threshold <= 0:
        raise ValueError("clustering threshold must be positive")
    data, wv = _prepared(db, weights, cfg)
    w, p = wv.weight, cfg.p

    cents, assign = seed_clusters(data, threshold, w, p)
    k = len(cents)
    for _ in range(MAX_LLOYD_ITERATIONS):
        new_cents = _means(data, assign, k, cents, w, p)
        shift = float(np.abs(new_cents - cents).max())
        cents = new_cents
        new_assign, _ = _nearest(data, cents, w, p)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        if shift <= CENTROID_SHIFT_TOL:
            cents = _means(data, assign, k, cents, w, p)
            break
    return ClusterModel(k=k, centroids=cents, assignment=assign, threshold=threshold)


def cluster_quality(
    model: ClusterModel,
    db: FeatureDatabase,
    weights: WeightVector | None = None,
    cfg: MatchConfig = DEFAULT_MATCH,
) -> tuple[float, float, float]:
    """(mean intra-cluster distance, min inter-centroid distance, ratio).

    Tight, well-separated clusterings score a small ratio.  With a single
    cluster the minimum inter-centroid distance is infinite and the ratio is
    0 by convention.
    """
    data, wv = _prepared(db, weights, cfg)
    w, p = wv.weight, cfg.p
    own = np.array(
        [
            _distance_matrix(data[i : i + 1], model.centroids[a], w, p)[0]
            for i, a in enumerate(model.assignment)
        ]
    )
    mean_intra = float(own.mean())
    if model.k == 1:
        return mean_intra, math.inf, 0.0
    min_inter = math.inf
    for a in range(model.k):
        for b in range(a + 1, model.k):
            d = _distance_matrix(
                model.centroids[a : a + 1], model.centroids[b], w, p
            )[0]
            min_inter = min(min_inter, float(d))
    return mean_intra, min_inter, mean_intra / min_inter
