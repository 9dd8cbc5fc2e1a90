"""Pearson correlations between finger channels, per grasp type."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from ..dataset import TrialRecord
from ..errors import DomainError, UndefinedCorrelationError
from ..hand import FINGERS, FingerId, GraspTrial, GraspType

__all__ = [
    "pearson",
    "CorrelationMatrix",
    "PairExtrema",
    "CorrelationExtrema",
    "correlation_matrix",
    "grasp_type_correlations",
    "cross_domain_correlations",
    "correlation_extrema",
    "FINGER_PAIRS",
]

FINGER_PAIRS = tuple(itertools.combinations(FINGERS, 2))


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise DomainError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise DomainError("need at least two samples")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("correlation undefined for a constant series")
    xc = x - x.mean()
    yc = y - y.mean()
    r = np.dot(xc, yc) / np.sqrt(np.dot(xc, xc) * np.dot(yc, yc))
    return float(np.clip(r, -1.0, 1.0))


@dataclass(frozen=True)
class CorrelationMatrix:
    """5x5 finger-pair coefficients; undefined entries are NaN."""

    r: np.ndarray
    domain: str = "force"
    grasp_type: GraspType | None = None
    labels: tuple[str, ...] = tuple(f.label for f in FINGERS)

    def __getitem__(self, pair: tuple[FingerId, FingerId]) -> float:
        a, b = pair
        return float(self.r[int(a), int(b)])

    @property
    def undefined(self) -> list[tuple[FingerId, FingerId]]:
        return [(a, b) for a, b in FINGER_PAIRS if np.isnan(self.r[a, b])]

    @classmethod
    def from_pairs(cls, values: Mapping[tuple[FingerId, FingerId], float], **kw):
        r = np.eye(5)
        for (a, b), v in values.items():
            r[int(a), int(b)] = r[int(b), int(a)] = v
        return cls(r, **kw)


def correlation_matrix(series: np.ndarray, domain: str = "force", grasp_type=None) -> CorrelationMatrix:
    """Pairwise Pearson coefficients of the 5 columns of ``series``."""
    series = np.asarray(series, dtype=float)
    r = np.eye(5)
    for a, b in FINGER_PAIRS:
        try:
            v = pearson(series[:, a], series[:, b])
        except UndefinedCorrelationError:
            v = np.nan
        r[a, b] = r[b, a] = v
    return CorrelationMatrix(r, domain, grasp_type)


def _channels(trial: GraspTrial, domain: str) -> np.ndarray:
    if domain == "force":
        return trial.forces
    if domain == "posture":
        return trial.angles
    raise DomainError(f"unknown domain {domain!r}")


def _pooled(items, domain: str, window: str) -> dict[GraspType, np.ndarray]:
    pooled: dict[GraspType, list[np.ndarray]] = {}
    # canonical trial order, so pooled sums do not depend on input order
    items = sorted(items, key=lambda it: (it.trial if isinstance(it, TrialRecord) else it).meta.key)
    for item in items:
        if window == "full":
            trial = item.trial if isinstance(item, TrialRecord) else item
            chunk = _channels(trial, domain)
        elif window == "hold":
            if not isinstance(item, TrialRecord):
                raise DomainError("the hold window needs segmented trial records")
            ann = item.phases
            chunk = _channels(item.trial, domain)[ann.hold_start:ann.hold_end]
        else:
            raise DomainError(f"unknown window {window!r}")
        gt = item.grasp_type if isinstance(item, TrialRecord) else item.meta.grasp_type
        pooled.setdefault(gt, []).append(chunk)
    return {gt: np.concatenate(chunks) for gt, chunks in sorted(pooled.items(), key=lambda kv: kv[0].order)}


def grasp_type_correlations(
    items: Iterable[GraspTrial | TrialRecord],
    domain: str = "force",
    window: str = "full",
) -> dict[GraspType, CorrelationMatrix]:
    """Finger-pair correlations per grasp type over concatenated trial series.

    ``items`` are trials (or segmented records, which ``window="hold"``
    requires).  Pairs involving a constant channel come back as NaN and are
    listed in :attr:`CorrelationMatrix.undefined`.
    """
    pooled = _pooled(list(items), domain, window)
    return {gt: correlation_matrix(x, domain, gt) for gt, x in pooled.items()}


def cross_domain_correlations(
    items: Iterable[GraspTrial | TrialRecord], window: str = "full"
) -> dict[GraspType, np.ndarray]:
    """``r[a, b] = pearson(force of finger a, flex angle of finger b)`` per grasp type."""
    items = list(items)
    forces = _pooled(items, "force", window)
    angles = _pooled(items, "posture", window)
    out = {}
    for gt in forces:
        r = np.full((5, 5), np.nan)
        for a in range(5):
            for b in range(5):
                try:
                    r[a, b] = pearson(forces[gt][:, a], angles[gt][:, b])
                except UndefinedCorrelationError:
                    pass
        out[gt] = r
    return out


@dataclass(frozen=True)
class PairExtrema:
    max_r: float
    max_type: GraspType
    min_r: float
    min_type: GraspType


@dataclass(frozen=True)
class CorrelationExtrema:
    """``table[domain][(finger_a, finger_b)]`` -> :class:`PairExtrema`."""

    table: dict[str, dict[tuple[FingerId, FingerId], PairExtrema]]

    def __getitem__(self, key):
        domain, pair = key
        return self.table[domain][tuple(pair)]

    def rows(self):
        for domain in sorted(self.table):
            for pair, e in self.table[domain].items():
                yield domain, pair, e


def correlation_extrema(matrices) -> CorrelationExtrema:
    """Scan grasp types for the largest and smallest coefficient of every pair.

    ``matrices`` is an iterable of :class:`CorrelationMatrix` (or a mapping
    whose values are such matrices, or mappings of them); grouping is by each
    matrix's ``domain``.  Ties keep the earliest grasp type.
    """
    flat: list[CorrelationMatrix] = []

    def collect(obj):
        if isinstance(obj, CorrelationMatrix):
            flat.append(obj)
        elif isinstance(obj, Mapping):
            for v in obj.values():
                collect(v)
        else:
            for v in obj:
                collect(v)

    collect(matrices)
    if not flat:
        raise DomainError("no correlation matrices given")
    flat.sort(key=lambda m: (m.domain, m.grasp_type.order if m.grasp_type else -1))
    table: dict[str, dict] = {}
    for m in flat:
        pairs = table.setdefault(m.domain, {})
        for pair in FINGER_PAIRS:
            v = m[pair]
            if np.isnan(v):
                continue
            cur = pairs.get(pair)
            if cur is None:
                pairs[pair] = PairExtrema(v, m.grasp_type, v, m.grasp_type)
                continue
            if v > cur.max_r:
                cur = PairExtrema(v, m.grasp_type, cur.min_r, cur.min_type)
            if v < cur.min_r:
                cur = PairExtrema(cur.max_r, cur.max_type, v, m.grasp_type)
            pairs[pair] = cur
    return CorrelationExtrema(table)
