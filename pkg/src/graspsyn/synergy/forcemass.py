"""Hold force as a function of object mass, per grasp type."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from ..dataset import TrialRecord
from ..errors import DomainError, InsufficientDataError
from ..hand import GraspType

__all__ = ["ForceMassModel", "Interpolated", "force_mass_fit", "force_mass_eval"]


class Interpolated(NamedTuple):
    value: float | np.ndarray
    extrapolated: bool | np.ndarray


@dataclass(frozen=True)
class ForceMassModel:
    """Per-object mean hold force against object mass.

    ``finger_forces`` holds the matching per-finger means, shape ``(n, 5)``.
    """

    grasp_type: GraspType
    masses: np.ndarray
    forces: np.ndarray
    finger_forces: np.ndarray | None = None
    objects: tuple[str, ...] = ()

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        f = np.asarray(self.forces, dtype=float)
        if m.shape != f.shape or m.ndim != 1 or m.size < 2:
            raise InsufficientDataError("need at least two (mass, force) points")
        if np.any(np.diff(m) <= 0):
            raise DomainError("masses must strictly increase")
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "forces", f)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.masses.tolist(), self.forces.tolist()))


def force_mass_fit(records: Iterable[TrialRecord], grasp_type: GraspType) -> ForceMassModel:
    """Average hold total force over each object's trials; objects without a mass are skipped."""
    per_object: dict[tuple[float, str], list[np.ndarray]] = {}
    for rec in records:
        obj = rec.trial.meta.object
        if rec.grasp_type is not grasp_type or obj.mass_g is None:
            continue
        per_object.setdefault((obj.mass_g, obj.name), []).append(rec.features.mean_forces)
    masses = sorted({m for m, _ in per_object})
    if len(masses) < 2:
        raise InsufficientDataError(
            f"{grasp_type.value}: need at least two distinct object masses, got {len(masses)}"
        )
    finger, names = [], []
    for m in masses:
        keys = [k for k in per_object if k[0] == m]
        stacked = np.concatenate([np.atleast_2d(per_object[k]) for k in sorted(keys)])
        finger.append(stacked.mean(axis=0))
        names.append("+".join(name for _, name in sorted(keys)))
    finger = np.array(finger)
    return ForceMassModel(grasp_type, np.array(masses), finger.sum(axis=1), finger, tuple(names))


def force_mass_eval(model: ForceMassModel, mass_g) -> Interpolated:
    """Piecewise-linear in mass, extended linearly past either end."""
    x = np.asarray(mass_g, dtype=float)
    xs, ys = model.masses, model.forces
    y = np.interp(x, xs, ys)
    lo = x < xs[0]
    hi = x > xs[-1]
    y = np.where(lo, ys[0] + (ys[1] - ys[0]) / (xs[1] - xs[0]) * (x - xs[0]), y)
    y = np.where(hi, ys[-1] + (ys[-1] - ys[-2]) / (xs[-1] - xs[-2]) * (x - xs[-1]), y)
    flag = lo | hi
    if y.ndim == 0:
        return Interpolated(float(y), bool(flag))
    return Interpolated(y, flag)
