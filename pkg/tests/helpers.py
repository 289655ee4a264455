"""Shared test fixtures and builders."""

from __future__ import annotations

import numpy as np

from wordspot.features import FEATURE_DIM, FeatureVector
from wordspot.imaging import BinaryImage, BoundingBox, GrayImage
from wordspot.store import FeatureDatabase, WordRecord

PLANTED_THRESHOLD = 0.43


def random_binary(rng: np.random.Generator, h: int, w: int, p: float = 0.4) -> BinaryImage:
    return BinaryImage(rng.random((h, w)) < p)


def random_gray(rng: np.random.Generator, h: int, w: int) -> GrayImage:
    return GrayImage(rng.integers(0, 256, size=(h, w), dtype=np.int64))


def random_feature_vector(rng: np.random.Generator) -> FeatureVector:
    return FeatureVector(rng.normal(size=FEATURE_DIM))


def random_database(rng: np.random.Generator, n: int) -> FeatureDatabase:
    records = [
        WordRecord(
            f"doc{rng.integers(0, 3)}",
            i,
            BoundingBox(
                int(rng.integers(0, 50)),
                int(rng.integers(0, 50)),
                int(rng.integers(1, 30)),
                int(rng.integers(1, 30)),
            ),
            random_feature_vector(rng),
        )
        for i in range(n)
    ]
    return FeatureDatabase.from_records(records)


def database_from_matrix(matrix: np.ndarray, doc_id: str = "m") -> FeatureDatabase:
    records = [
        WordRecord(doc_id, i, BoundingBox(0, 0, 1, 1), FeatureVector(row))
        for i, row in enumerate(np.asarray(matrix, dtype=np.float64))
    ]
    return FeatureDatabase.from_records(records)


def planted_dataset() -> tuple[FeatureDatabase, np.ndarray]:
    """Ten records in two planted clusters of five, 6 active features.

    Slots 0/1 are the informative pair: cluster indicator plus/minus a
    jitter whose variance matches the indicator's, making the two columns
    exactly uncorrelated in-sample (so both earn the floor lambda and
    nearly all the weight).  Slots 2-5 are two cross-cutting noise patterns,
    two exact copies each (lambda exactly 1, so they get downweighted);
    under uniform weights their big swings dominate the distance and drag
    records of different clusters together.  Remaining slots are constant.
    """
    c = np.sqrt(0.25 / 0.8)
    jitter = np.array([0.0, -c, c, -c, c] * 2)
    indicator = np.array([0.0] * 5 + [1.0] * 5)
    noise_a = np.array([0, 1, 0, 1, 0.5, 1, 0, 1, 0, 0.5])
    noise_b = np.array([1, 1, 0, 0, 0.5, 0, 0, 1, 1, 0.5])
    matrix = np.full((10, FEATURE_DIM), 0.5)
    matrix[:, 0] = indicator + jitter
    matrix[:, 1] = indicator - jitter
    matrix[:, 2] = noise_a
    matrix[:, 3] = noise_a
    matrix[:, 4] = noise_b
    matrix[:, 5] = noise_b
    labels = np.array([0] * 5 + [1] * 5)
    return database_from_matrix(matrix, "planted"), labels


def assignment_matches_labels(assignment, labels) -> bool:
    """True when clusters are exactly the planted groups (up to renaming)."""
    groups: dict[int, set[int]] = {}
    for cluster, label in zip(assignment, labels):
        groups.setdefault(int(cluster), set()).add(int(label))
    pure = all(len(s) == 1 for s in groups.values())
    return pure and len(groups) == len(set(labels.tolist()))


def has_mixed_cluster(assignment, labels) -> bool:
    groups: dict[int, set[int]] = {}
    for cluster, label in zip(assignment, labels):
        groups.setdefault(int(cluster), set()).add(int(label))
    return any(len(s) > 1 for s in groups.values())
