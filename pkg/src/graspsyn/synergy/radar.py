"""Radar (spider) profiles of hold postures and forces per grasp type."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..dataset import TrialRecord
from ..errors import DomainError
from ..hand import FINGERS, GraspType, decompose_angles, posture_labels

log = logging.getLogger(__name__)

__all__ = ["RadarProfile", "radar_profiles", "radar_area"]


@dataclass(frozen=True)
class RadarProfile:
    grasp_type: GraspType
    domain: str
    labels: tuple[str, ...]
    radii: np.ndarray
    n_trials: int = 0

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        if radii.shape != (len(self.labels),):
            raise DomainError("one radius per spoke label")
        if np.any(radii < 0):
            raise DomainError("radar radii must be >= 0")
        object.__setattr__(self, "radii", radii)

    @property
    def spokes(self) -> list[tuple[str, float]]:
        return list(zip(self.labels, self.radii.tolist()))


def radar_profiles(
    records: Iterable[TrialRecord],
    grasp_types: Iterable[GraspType] | None = None,
) -> dict[str, dict[GraspType, RadarProfile]]:
    """Mean hold-phase joint angles (15 spokes) and forces (5 spokes) per type.

    Types listed in ``grasp_types`` without any usable record are dropped with
    a warning.
    """
    groups: dict[GraspType, list[TrialRecord]] = {}
    for rec in records:
        groups.setdefault(rec.grasp_type, []).append(rec)
    wanted = list(grasp_types) if grasp_types is not None else sorted(groups, key=lambda g: g.order)
    posture, force = {}, {}
    for gt in wanted:
        recs = groups.get(gt, [])
        if not recs:
            log.warning("no usable trials for grasp type %s; omitted from radar profiles", gt.value)
            continue
        angles = np.mean([decompose_angles(r.features.mean_angles) for r in recs], axis=0)
        forces = np.mean([r.features.mean_forces for r in recs], axis=0)
        posture[gt] = RadarProfile(gt, "posture", tuple(posture_labels()), angles, len(recs))
        force[gt] = RadarProfile(gt, "force", tuple(f.label for f in FINGERS), forces, len(recs))
    return {"posture": posture, "force": force}


def radar_area(profile) -> float:
    """Area of the pentagon drawn by 5 equally spaced spokes.

    Accepts a :class:`RadarProfile` or a plain sequence of 5 radii.
    """
    radii = np.asarray(profile.radii if isinstance(profile, RadarProfile) else profile, dtype=float)
    if radii.shape != (5,):
        raise DomainError(f"pentagon area needs exactly 5 spokes, got {radii.size}")
    return float(0.5 * math.sin(2 * math.pi / 5) * np.sum(radii * np.roll(radii, -1)))
