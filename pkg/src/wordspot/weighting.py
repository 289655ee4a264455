"""Per-feature weights learned from the indexed corpus.

For each feature the coefficient of multiple correlation measures how well
the remaining features can linearly replace it.  A feature nobody can stand
in for carries unique information and earns a large weight; a redundant one
is downweighted.  Weights are the normalized reciprocals of those
coefficients, w_i = (1/lambda_i) / sum_j (1/lambda_j).

Two equivalent lambda computations are provided: the textbook product of
partial correlations, built from the first-order recursion

    r_ab.c = (r_ab - r_ac * r_bc) / sqrt((1 - r_ac^2) (1 - r_bc^2)),

and a numerically robust identity on the inverse correlation matrix,
lambda^2 = 1 - 1 / (R^-1)_tt.  The inverse form is the production path; the
recursion is kept as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LAMBDA_FLOOR = 1e-3
VARIANCE_EPS = 1e-24
RIDGE = 1e-8
CONDITION_LIMIT = 1e12
PARTIAL_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Symmetric Pearson correlations with zero-variance columns flagged off.

    Inactive rows and columns carry zero off-diagonal entries by convention;
    the diagonal is 1 everywhere.
    """

    r: np.ndarray
    active: np.ndarray

    def __post_init__(self) -> None:
        r = np.asarray(self.r, dtype=np.float64)
        active = np.asarray(self.active, dtype=bool)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError("correlation matrix must be square")
        if active.shape != (r.shape[0],):
            raise ValueError("active flags must match the matrix dimension")
        r = r.copy()
        r.setflags(write=False)
        active = active.copy()
        active.setflags(write=False)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "active", active)

    @property
    def dim(self) -> int:
        return self.r.shape[0]


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Per-feature weights plus the lambda diagnostics that produced them.

    Active weights are non-negative and sum to 1; inactive features carry
    weight 0.  Lambda values are clamped into [LAMBDA_FLOOR, 1] for active
    features and stored as 0 for inactive ones.
    """

    lam: np.ndarray
    weight: np.ndarray
    active: np.ndarray

    def __post_init__(self) -> None:
        lam = np.asarray(self.lam, dtype=np.float64)
        weight = np.asarray(self.weight, dtype=np.float64)
        active = np.asarray(self.active, dtype=bool)
        if lam.ndim != 1 or lam.shape != weight.shape or lam.shape != active.shape:
            raise ValueError("lam, weight, and active must be 1-D and congruent")
        if not np.all(np.isfinite(lam)) or not np.all(np.isfinite(weight)):
            raise ValueError("weights and lambdas must be finite")
        if np.any(weight < 0):
            raise ValueError("weights must be non-negative")
        if np.any(weight[~active] != 0):
            raise ValueError("inactive features must carry zero weight")
        total = float(weight[active].sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"active weights must sum to 1, got {total!r}")
        lam, weight, active = lam.copy(), weight.copy(), active.copy()
        for arr in (lam, weight, active):
            arr.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "active", active)

    @property
    def dim(self) -> int:
        return self.lam.shape[0]


def _column_matrix(db) -> np.ndarray:
    if hasattr(db, "feature_matrix"):
        return db.feature_matrix()
    return np.asarray(db, dtype=np.float64)


def correlation_matrix(db) -> CorrelationMatrix:
    """Pearson correlation of every column pair over all records.

    Accepts a FeatureDatabase or a plain (n, dim) array.  Columns whose
    sample variance falls below VARIANCE_EPS are marked inactive.  Fewer
    than 3 records leave the correlations statistically meaningless for
    weighting, so that is an error.
    """
    data = _column_matrix(db)
    if data.ndim != 2:
        raise ValueError("expected a 2-D record/feature matrix")
    n, dim = data.shape
    if n < 3:
        raise ValueError(f"need at least 3 records to correlate, got {n}")
    centered = data - data.mean(axis=0)
    sq = (centered**2).sum(axis=0)
    active = sq / (n - 1) >= VARIANCE_EPS
    r = np.zeros((dim, dim))
    np.fill_diagonal(r, 1.0)
    idx = np.flatnonzero(active)
    if idx.size:
        scaled = centered[:, idx] / np.sqrt(sq[idx])
        block = scaled.T @ scaled
        block = np.clip((block + block.T) / 2.0, -1.0, 1.0)
        np.fill_diagonal(block, 1.0)
        r[np.ix_(idx, idx)] = block
    return CorrelationMatrix(r, active)


def multiple_correlation_recursive(cm: CorrelationMatrix, target: int) -> float:
    """Multiple correlation of ``target`` with all other active features,
    evaluated as sqrt(1 - prod_j (1 - r^2_{target,j | 1..j-1})).

    Partial correlations come from the first-order recursion applied over a
    growing conditioning set in ascending feature order; every (1 - r^2)
    denominator factor is clamped to at least PARTIAL_EPS.
    """
    if not cm.active[target]:
        raise ValueError(f"feature {target} is inactive")
    others = [i for i in np.flatnonzero(cm.active) if i != target]
    if not others:
        raise ValueError("need at least one other active feature")
    order = [target] + others
    work = cm.r[np.ix_(order, order)].copy()
    m = len(order)
    residual = 1.0
    for step in range(1, m):
        r_target = work[0, step]
        residual *= max(0.0, 1.0 - r_target * r_target)
        if step == m - 1:
            break
        remaining = [0] + list(range(step + 1, m))
        denom = np.sqrt(np.maximum(1.0 - work[remaining, step] ** 2, PARTIAL_EPS))
        for ai, a in enumerate(remaining):
            for bi in range(ai + 1, len(remaining)):
                b = remaining[bi]
                value = (work[a, b] - work[a, step] * work[b, step]) / (
                    denom[ai] * denom[bi]
                )
                value = min(1.0, max(-1.0, value))
                work[a, b] = value
                work[b, a] = value
    return float(np.sqrt(min(1.0, max(0.0, 1.0 - residual))))


def _active_inverse(cm: CorrelationMatrix) -> tuple[np.ndarray, np.ndarray]:
    idx = np.flatnonzero(cm.active)
    sub = cm.r[np.ix_(idx, idx)].copy()
    cond = np.linalg.cond(sub)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        sub = sub + RIDGE * np.eye(len(idx))
    return idx, np.linalg.inv(sub)


def multiple_correlation_matrix_identity(cm: CorrelationMatrix, target: int) -> float:
    """Robust equivalent of the recursive form: sqrt(1 - 1 / (R^-1)_tt).

    The inverse is taken over active columns only; a ridge of RIDGE * I is
    added when the condition estimate exceeds CONDITION_LIMIT, which keeps
    exactly-duplicated feature columns invertible.
    """
    if not cm.active[target]:
        raise ValueError(f"feature {target} is inactive")
    idx, inverse = _active_inverse(cm)
    t = int(np.flatnonzero(idx == target)[0])
    value = 1.0 - 1.0 / inverse[t, t]
    return float(np.sqrt(min(1.0, max(0.0, value))))


def weights_from_lambda(lam: np.ndarray, active: np.ndarray) -> WeightVector:
    """Normalize reciprocal lambdas into weights over the active features.

    Lambdas are floored at LAMBDA_FLOOR first, which caps the reciprocal of
    a feature uncorrelated with everything else.
    """
    lam = np.asarray(lam, dtype=np.float64)
    active = np.asarray(active, dtype=bool)
    if int(active.sum()) < 2:
        raise ValueError("need at least 2 active features to weight")
    floored = np.zeros_like(lam)
    floored[active] = np.maximum(np.abs(lam[active]), LAMBDA_FLOOR)
    weight = np.zeros_like(lam)
    inverse = 1.0 / floored[active]
    weight[active] = inverse / inverse.sum()
    return WeightVector(lam=floored, weight=weight, active=active)


def compute_weights(cm: CorrelationMatrix) -> WeightVector:
    """Learn all per-feature weights from a correlation matrix."""
    if int(cm.active.sum()) < 2:
        raise ValueError("need at least 2 active features to weight")
    idx, inverse = _active_inverse(cm)
    diag = np.diag(inverse)
    lam_active = np.sqrt(np.clip(1.0 - 1.0 / diag, 0.0, 1.0))
    lam = np.zeros(cm.dim)
    lam[idx] = lam_active
    return weights_from_lambda(lam, cm.active)


def uniform_weights(dim: int, active: np.ndarray | None = None) -> WeightVector:
    """Equal weight on every active feature (the unweighted baseline).

    With all features active this is the all-1/dim vector; constant columns,
    which cannot discriminate anything, are excluded and the rest
    renormalized so the weights still sum to 1.
    """
    mask = np.ones(dim, dtype=bool) if active is None else np.asarray(active, bool)
    count = int(mask.sum())
    if count == 0:
        raise ValueError("uniform weights need at least one active feature")
    lam = np.where(mask, 1.0, 0.0)
    weight = np.where(mask, 1.0 / count, 0.0)
    return WeightVector(lam=lam, weight=weight, active=mask)


def uniform_weights_for(db) -> WeightVector:
    """Uniform baseline sized to a database's varying columns.

    Degenerate databases where nothing varies (e.g. a single record) fall
    back to weighting every feature equally.
    """
    col_min = np.asarray(db.col_min, dtype=np.float64)
    col_max = np.asarray(db.col_max, dtype=np.float64)
    varying = col_max > col_min
    if not varying.any():
        varying = np.ones(col_min.shape[0], dtype=bool)
    return uniform_weights(col_min.shape[0], varying)


def apply_weights(vector, weights: WeightVector):
    """Elementwise product of a feature vector with the weight diagonal."""
    from wordspot.features import FeatureVector

    if not isinstance(vector, FeatureVector):
        raise TypeError("apply_weights expects a FeatureVector")
    if vector.values.shape[0] != weights.dim:
        raise ValueError(
            f"dimension mismatch: vector {vector.values.shape[0]}, "
            f"weights {weights.dim}"
        )
    return FeatureVector(vector.values * weights.weight)
