"""Exact t-SNE embedding into two dimensions.

Affinities use squared Euclidean distances with a per-point Gaussian
bandwidth chosen by bisection so that each conditional distribution has
entropy ``log(perplexity)``.  The low-dimensional kernel is a Student-t with
one degree of freedom; optimisation is gradient descent with momentum,
per-parameter gains and early exaggeration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

__all__ = [
    "Embedding",
    "squared_distances",
    "conditional_probabilities",
    "joint_probabilities",
    "kl_divergence",
    "kl_gradient",
    "tsne_embed",
    "effective_perplexity",
]

ENTROPY_TOL = 1e-5
_P_FLOOR = 1e-12


@dataclass(frozen=True)
class Embedding:
    points: np.ndarray
    final_kl: float
    seed: int
    perplexity: float
    kl_history: np.ndarray
    learning_rate: float


def squared_distances(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    sq = np.sum(X * X, axis=1)
    D = sq[:, None] + sq[None, :] - 2.0 * X @ X.T
    np.fill_diagonal(D, 0.0)
    return np.maximum(D, 0.0)


def _row_distribution(d: np.ndarray, beta: float):
    """Gibbs distribution over neighbour distances ``d`` and its entropy (nats)."""
    shifted = d - d.min()
    w = np.exp(-beta * shifted)
    z = w.sum()
    p = w / z
    return p, np.log(z) + beta * np.dot(shifted, p)


def conditional_probabilities(D2, perplexity: float, tol: float = ENTROPY_TOL, max_iter: int = 200):
    """Row-stochastic ``P[i, j] = p(j | i)`` with zero diagonal.

    Returns ``(P, beta, entropy)``; ``beta`` is the Gaussian precision
    ``1 / (2 sigma^2)`` per point.  Points whose neighbours are all equidistant
    get a uniform row whatever the target.
    """
    D2 = np.asarray(D2, dtype=float)
    n = D2.shape[0]
    if not (0 < perplexity < n - 1):
        raise DomainError(f"perplexity {perplexity} infeasible for {n} points")
    target = np.log(perplexity)
    P = np.zeros((n, n))
    betas = np.ones(n)
    entropy = np.zeros(n)
    for i in range(n):
        d = np.delete(D2[i], i)
        beta, lo, hi = 1.0, 0.0, np.inf
        p, h = _row_distribution(d, beta)
        for _ in range(max_iter):
            if abs(h - target) <= tol:
                break
            if h > target:
                lo = beta
                beta = beta * 2.0 if np.isinf(hi) else 0.5 * (beta + hi)
            else:
                hi = beta
                beta = 0.5 * (beta + lo)
            p, h = _row_distribution(d, beta)
        P[i, np.arange(n) != i] = p
        betas[i] = beta
        entropy[i] = h
    return P, betas, entropy


def joint_probabilities(P_cond: np.ndarray) -> np.ndarray:
    n = P_cond.shape[0]
    P = (P_cond + P_cond.T) / (2.0 * n)
    return np.maximum(P, _P_FLOOR)


def _student_t(Y: np.ndarray):
    num = 1.0 / (1.0 + squared_distances(Y))
    np.fill_diagonal(num, 0.0)
    return num, num / num.sum()


def _kl_terms(P: np.ndarray):
    """Off-diagonal ``P`` and its negative entropy, fixed for a whole run."""
    Poff = P.copy()
    np.fill_diagonal(Poff, 0.0)
    safe = np.where(Poff > 0, Poff, 1.0)
    return Poff, float(np.sum(Poff * np.log(safe)))


def _kl(Poff: np.ndarray, plogp: float, Q: np.ndarray) -> float:
    return plogp - float(np.sum(Poff * np.log(np.maximum(Q, _P_FLOOR))))


def kl_divergence(P: np.ndarray, Y) -> float:
    """KL(P || Q) over off-diagonal pairs."""
    _, Q = _student_t(np.asarray(Y, dtype=float))
    return _kl(*_kl_terms(P), Q)


def _gradient(P: np.ndarray, Y: np.ndarray, num: np.ndarray, Q: np.ndarray) -> np.ndarray:
    W = (P - Q) * num
    np.fill_diagonal(W, 0.0)
    return 4.0 * (W.sum(axis=1)[:, None] * Y - W @ Y)


def kl_gradient(P: np.ndarray, Y) -> np.ndarray:
    Y = np.asarray(Y, dtype=float)
    num, Q = _student_t(Y)
    return _gradient(P, Y, num, Q)


def effective_perplexity(perplexity: float, n: int) -> float:
    """Perplexity actually used: capped at ``(n - 1) / 3`` for small datasets."""
    return min(float(perplexity), (n - 1) / 3.0)


def tsne_embed(
    X,
    perplexity: float = 30.0,
    seed: int = 0,
    iterations: int = 1000,
    learning_rate: float | str = "auto",
    early_exaggeration: float = 12.0,
    exaggeration_iters: int = 250,
    momentum: tuple[float, float] = (0.5, 0.8),
    min_gain: float = 0.01,
) -> Embedding:
    """Embed the rows of ``X`` in 2-D; identical inputs and seed give identical output.

    ``learning_rate="auto"`` uses ``max(n / early_exaggeration / 4, 50)``, which
    keeps the late iterations from oscillating on small datasets.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DomainError("feature matrix must be 2-D")
    n = X.shape[0]
    if n < 4:
        raise DomainError(f"t-SNE needs at least 4 points, got {n}")
    if not np.all(np.isfinite(X)):
        raise DomainError("non-finite entries in the feature matrix")
    if not (0 < perplexity < n - 1):
        raise DomainError(f"perplexity {perplexity} infeasible for {n} points")
    perp = effective_perplexity(perplexity, n)
    if learning_rate == "auto":
        learning_rate = max(n / early_exaggeration / 4.0, 50.0)

    P_cond, _, _ = conditional_probabilities(squared_distances(X), perp)
    P = joint_probabilities(P_cond)

    rng = np.random.default_rng(seed)
    Y = rng.normal(0.0, 1e-4, size=(n, 2))
    update = np.zeros_like(Y)
    gains = np.ones_like(Y)
    history = np.empty(iterations)
    Poff, plogp = _kl_terms(P)
    for it in range(iterations):
        exaggerate = it < exaggeration_iters
        mom = momentum[0] if it < exaggeration_iters else momentum[1]
        num, Q = _student_t(Y)
        if it:
            history[it - 1] = _kl(Poff, plogp, Q)  # KL after the previous step
        grad = _gradient(P * early_exaggeration if exaggerate else P, Y, num, Q)
        flipped = update * grad < 0.0
        gains = np.where(flipped, gains + 0.2, gains * 0.8)
        np.maximum(gains, min_gain, out=gains)
        update = mom * update - learning_rate * gains * grad
        Y = Y + update
        Y = Y - Y.mean(axis=0)
    final = kl_divergence(P, Y)
    if iterations:
        history[-1] = final
    return Embedding(Y, float(final), int(seed), perp, history, float(learning_rate))
