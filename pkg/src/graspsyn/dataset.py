"""In-memory trial collections and per-trial hold-phase feature extraction."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import DatasetError, DomainError, GraspError
from .hand import GraspTrial, GraspType, PhaseAnnotation, decompose_angles
from .phases import HoldFeatures, SegmentationConfig, hold_features, trial_phases

log = logging.getLogger(__name__)

__all__ = ["Dataset", "TrialRecord", "extract_features", "feature_matrix", "DOMAINS"]

DOMAINS = ("force", "posture")


class Dataset:
    """Trials held in canonical (subject, grasp type, object, trial) order.

    Iteration order never depends on insertion order, so every analysis is
    independent of how the trials were loaded.
    """

    def __init__(self, trials: Iterable[GraspTrial] = ()):
        by_key = {}
        for trial in trials:
            key = trial.meta.key
            if key in by_key:
                raise DatasetError([f"duplicate trial key {key}"])
            by_key[key] = trial
        self._trials = [by_key[k] for k in sorted(by_key)]

    def __iter__(self) -> Iterator[GraspTrial]:
        return iter(self._trials)

    def __len__(self) -> int:
        return len(self._trials)

    def __getitem__(self, i: int) -> GraspTrial:
        return self._trials[i]

    @property
    def grasp_types(self) -> list[GraspType]:
        return sorted({t.meta.grasp_type for t in self._trials}, key=lambda g: g.order)

    @property
    def subjects(self) -> list[str]:
        return sorted({t.meta.subject_id for t in self._trials})

    def by_type(self) -> dict[GraspType, list[GraspTrial]]:
        out: dict[GraspType, list[GraspTrial]] = {}
        for trial in self._trials:
            out.setdefault(trial.meta.grasp_type, []).append(trial)
        return out

    def subset(self, grasp_type: GraspType) -> "Dataset":
        return Dataset(t for t in self._trials if t.meta.grasp_type is grasp_type)


@dataclass(frozen=True)
class TrialRecord:
    trial: GraspTrial
    phases: PhaseAnnotation
    features: HoldFeatures

    @property
    def grasp_type(self) -> GraspType:
        return self.trial.meta.grasp_type


def extract_features(
    dataset: Iterable[GraspTrial],
    cfg: SegmentationConfig | None = None,
    strict: bool = True,
) -> list[TrialRecord]:
    """Segment every trial and compute its hold features.

    With ``strict`` any failure raises a :class:`DatasetError` naming every
    failing trial; otherwise failures are logged and skipped.
    """
    records, problems = [], []
    for trial in dataset:
        try:
            ann = trial_phases(trial, cfg)
            records.append(TrialRecord(trial, ann, hold_features(trial, ann)))
        except GraspError as exc:
            problems.append(f"{trial.label}: {exc}")
    if problems:
        if strict:
            raise DatasetError(problems)
        for p in problems:
            log.warning("skipping trial %s", p)
    return records


def feature_matrix(records: list[TrialRecord], domain: str, decomposed: bool = False) -> np.ndarray:
    """Stack hold-phase means into an ``(n_trials, D)`` observation matrix.

    ``force`` gives the 5 fingertip forces.  ``posture`` gives the 5 combined
    flex angles, or the 15 joint angles with ``decomposed``.
    """
    if domain == "force":
        rows = [r.features.mean_forces for r in records]
    elif domain == "posture":
        rows = [r.features.mean_angles for r in records]
    else:
        raise DomainError(f"unknown domain {domain!r}")
    X = np.array(rows, dtype=float).reshape(len(rows), 5)
    if domain == "posture" and decomposed:
        X = decompose_angles(X)
    return X
