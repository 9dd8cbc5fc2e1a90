"""Principal component analysis and elbow selection of the component count."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateDataError, DomainError

__all__ = ["PcaModel", "pca_fit", "pca_project", "pca_reconstruct", "elbow_select"]


@dataclass(frozen=True)
class PcaModel:
    """Components are rows, in descending variance order.

    ``scale`` is the per-feature divisor applied before projection (ones
    unless the model was fitted on standardised data).
    """

    mean: np.ndarray
    components: np.ndarray
    explained: np.ndarray
    eigenvalues: np.ndarray
    scale: np.ndarray

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.explained)

    @property
    def n_features(self) -> int:
        return self.mean.size


def pca_fit(X, standardize: bool = False) -> PcaModel:
    """Eigendecomposition of the sample covariance (divisor ``N - 1``).

    Each component is signed so that its largest-magnitude loading is
    positive.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2 or X.shape[1] < 1:
        raise DomainError(f"need an (N >= 2, D >= 1) matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DomainError("non-finite entries in the feature matrix")
    mean = X.mean(axis=0)
    centered = X - mean
    if not np.any(np.ptp(X, axis=0) > 0):
        raise DegenerateDataError("all observations are identical")
    scale = np.ones(X.shape[1])
    if standardize:
        sd = centered.std(axis=0, ddof=1)
        scale = np.where(sd > 0, sd, 1.0)
        centered = centered / scale
    cov = centered.T @ centered / (X.shape[0] - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    evals = np.clip(evals[order], 0.0, None)
    comps = evecs[:, order].T
    for row in comps:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1
    trace = evals.sum()
    if trace <= 0:
        raise DegenerateDataError("zero total variance")
    return PcaModel(mean, comps, evals / trace, evals, scale)


def pca_project(model: PcaModel, observation) -> np.ndarray:
    """Scores of one observation (1-D) or a batch (rows)."""
    x = np.asarray(observation, dtype=float)
    if x.shape[-1] != model.n_features:
        raise DomainError(f"expected {model.n_features} features, got {x.shape[-1]}")
    return ((x - model.mean) / model.scale) @ model.components.T


def pca_reconstruct(model: PcaModel, scores, k: int | None = None) -> np.ndarray:
    s = np.asarray(scores, dtype=float)
    k = model.components.shape[0] if k is None else k
    return (s[..., :k] @ model.components[:k]) * model.scale + model.mean


def elbow_select(explained, zero_tol: float = 1e-12) -> int:
    """Component count at the knee of the cumulative explained-variance curve.

    The knee is the ``k`` whose cumulative value lies furthest above the chord
    from ``(1, cum_1)`` to ``(D, 1)``.  Trailing zero-variance components are
    dropped first so they cannot move the chord; a straight curve gives 1.
    """
    e = np.asarray(explained, dtype=float).ravel()
    if e.size == 0 or np.any(e < -zero_tol):
        raise DomainError("explained variance must be a non-empty nonnegative vector")
    if abs(e.sum() - 1.0) > 1e-6:
        e = e / e.sum()
    nonzero = np.flatnonzero(e > zero_tol)
    D = int(nonzero[-1]) + 1 if nonzero.size else 1
    if D <= 2:
        return 1
    cum = np.cumsum(e[:D])
    k = np.arange(1, D + 1)
    chord = cum[0] + (1.0 - cum[0]) * (k - 1) / (D - 1)
    gap = cum - chord
    best = int(np.argmax(gap))
    if gap[best] <= 1e-12:
        return 1
    return best + 1
