import math

import numpy as np
import pytest

from wordspot.clustering import ClusterModel, cluster_quality, ik_means, seed_clusters
from wordspot.features import FEATURE_DIM
from wordspot.matching import MatchConfig
from wordspot.weighting import WeightVector, compute_weights, correlation_matrix, uniform_weights

from helpers import (
    PLANTED_THRESHOLD,
    assignment_matches_labels,
    database_from_matrix,
    has_mixed_cluster,
    planted_dataset,
)


def slot_weights(index: int) -> WeightVector:
    active = np.zeros(FEATURE_DIM, dtype=bool)
    active[index] = True
    return WeightVector(
        lam=np.where(active, 1.0, 0.0),
        weight=np.where(active, 1.0, 0.0),
        active=active,
    )


def embedded_1d(values) -> "FeatureDatabase":
    matrix = np.zeros((len(values), FEATURE_DIM))
    matrix[:, 0] = values
    return database_from_matrix(matrix)


class TestSeededExample:
    def test_two_gapped_groups(self):
        db = embedded_1d([0.0, 0.1, 5.0, 5.1])
        model = ik_means(db, 1.0, slot_weights(0), MatchConfig(normalize=False))
        assert model.k == 2
        assert model.assignment.tolist() == [0, 0, 1, 1]

    def test_identical_records_single_cluster(self):
        db = embedded_1d([2.0, 2.0, 2.0])
        model = ik_means(db, 0.5, slot_weights(0), MatchConfig(normalize=False))
        assert model.k == 1
        mean_intra, min_inter, ratio = cluster_quality(
            model, db, slot_weights(0), MatchConfig(normalize=False)
        )
        assert mean_intra == 0.0
        assert math.isinf(min_inter)
        assert ratio == 0.0

    def test_threshold_validated(self):
        db = embedded_1d([0.0, 1.0])
        with pytest.raises(ValueError):
            ik_means(db, 0.0)

    def test_k_non_increasing_in_threshold(self):
        rng = np.random.default_rng(120)
        db = embedded_1d(rng.random(12) * 10)
        cfg = MatchConfig(normalize=False)
        ks = [
            ik_means(db, t, slot_weights(0), cfg).k
            for t in (0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
        ]
        assert ks == sorted(ks, reverse=True)

    def test_seeding_matches_independent_replay(self):
        # replay the seeding rules with plain loops: every record must join
        # a within-threshold nearest centroid or found its own cluster
        rng = np.random.default_rng(122)
        data = rng.random((25, 4))
        w = np.array([0.4, 0.3, 0.2, 0.1])
        threshold = 0.25
        centroids, assignment = seed_clusters(data, threshold, w, 1.0)

        replay_cents: list[np.ndarray] = []
        replay_counts: list[int] = []
        replay_assign: list[int] = []
        for record in data:
            if replay_cents:
                dists = [float(w @ np.abs(record - c)) for c in replay_cents]
                j = int(np.argmin(dists))
            else:
                dists, j = [], -1
            if replay_cents and dists[j] <= threshold:
                replay_assign.append(j)
                replay_counts[j] += 1
                replay_cents[j] = replay_cents[j] + (record - replay_cents[j]) / replay_counts[j]
            else:
                replay_assign.append(len(replay_cents))
                replay_cents.append(record.copy())
                replay_counts.append(1)
        assert assignment.tolist() == replay_assign
        assert np.allclose(centroids, np.array(replay_cents), atol=1e-12)


class TestLloydProperties:
    def fitted(self):
        rng = np.random.default_rng(121)
        matrix = np.zeros((14, FEATURE_DIM))
        matrix[:7, 0] = rng.normal(0.0, 0.3, size=7)
        matrix[7:, 0] = rng.normal(8.0, 0.3, size=7)
        matrix[:, 1] = rng.normal(size=14)
        db = database_from_matrix(matrix)
        cfg = MatchConfig(normalize=False)
        wv = uniform_weights(FEATURE_DIM, db.col_max > db.col_min)
        return db, cfg, wv, ik_means(db, 2.0, wv, cfg)

    def test_centroids_are_member_means(self):
        db, cfg, wv, model = self.fitted()
        data = db.feature_matrix()
        for j in range(model.k):
            members = data[model.assignment == j]
            assert len(members) > 0
            assert np.allclose(model.centroids[j], members.mean(axis=0), atol=1e-9)

    def test_assignment_locally_optimal(self):
        db, cfg, wv, model = self.fitted()
        data = db.feature_matrix()
        for i, a in enumerate(model.assignment):
            own = float(wv.weight @ np.abs(data[i] - model.centroids[a]))
            for j in range(model.k):
                other = float(wv.weight @ np.abs(data[i] - model.centroids[j]))
                assert own <= other + 1e-12

    def test_model_validation(self):
        with pytest.raises(ValueError):
            ClusterModel(
                k=2, centroids=np.zeros((1, 3)), assignment=np.zeros(4, dtype=int),
                threshold=1.0,
            )


class TestPlantedClusters:
    def test_weighted_separates_uniform_merges(self):
        db, labels = planted_dataset()
        cfg = MatchConfig()
        learned = compute_weights(correlation_matrix(db))
        uniform = uniform_weights(FEATURE_DIM, db.col_max > db.col_min)

        weighted = ik_means(db, PLANTED_THRESHOLD, learned, cfg)
        unweighted = ik_means(db, PLANTED_THRESHOLD, uniform, cfg)

        assert assignment_matches_labels(weighted.assignment, labels)
        assert has_mixed_cluster(unweighted.assignment, labels)
        assert unweighted.k >= 2

    def test_weighted_quality_ratio_strictly_smaller(self):
        db, labels = planted_dataset()
        cfg = MatchConfig()
        learned = compute_weights(correlation_matrix(db))
        uniform = uniform_weights(FEATURE_DIM, db.col_max > db.col_min)
        weighted = ik_means(db, PLANTED_THRESHOLD, learned, cfg)
        unweighted = ik_means(db, PLANTED_THRESHOLD, uniform, cfg)
        *_, ratio_weighted = cluster_quality(weighted, db, learned, cfg)
        *_, ratio_uniform = cluster_quality(unweighted, db, uniform, cfg)
        assert ratio_weighted < ratio_uniform

    def test_planted_weights_concentrate_on_informative_pair(self):
        db, _ = planted_dataset()
        wv = compute_weights(correlation_matrix(db))
        assert wv.weight[0] == pytest.approx(wv.weight[1], abs=1e-12)
        assert wv.weight[0] > 100 * wv.weight[2]
        noise = wv.weight[2:6]
        assert np.allclose(noise, noise[0], atol=1e-12)


class TestQuality:
    def test_points_on_centroids(self):
        db = embedded_1d([1.0, 1.0, 4.0, 4.0])
        cfg = MatchConfig(normalize=False)
        model = ik_means(db, 0.5, slot_weights(0), cfg)
        mean_intra, min_inter, ratio = cluster_quality(model, db, slot_weights(0), cfg)
        assert mean_intra == 0.0
        assert min_inter == pytest.approx(3.0, abs=1e-12)
        assert ratio == 0.0
