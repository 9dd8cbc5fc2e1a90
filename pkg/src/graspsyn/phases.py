"""Trial validation, reach-to-grasp phase segmentation and hold-phase features."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DomainError, SegmentationError, UnstableHoldError
from .hand import GraspTrial, HandPosture, PhaseAnnotation

__all__ = [
    "SegmentationConfig",
    "ValidationReport",
    "HoldFeatures",
    "MAX_COMBINED_ANGLE_DEG",
    "validate_trial",
    "segment_phases",
    "trial_phases",
    "hold_features",
]

MAX_COMBINED_ANGLE_DEG = 90.0 * 29.0 / 12.0


@dataclass(frozen=True)
class SegmentationConfig:
    """Detection thresholds.

    f_on : contact threshold on any fingertip [N]
    angle_rate_eps : mean flexion rate that counts as approach motion [deg/sample]
    hold_std : per-channel standard deviation below which forces count as steady [N]
    stable_window : window length for the steadiness test [samples]
    """

    f_on: float = 0.1
    angle_rate_eps: float = 0.05
    hold_std: float = 0.05
    stable_window: int = 40

    def __post_init__(self):
        if not (self.f_on > 0 and self.angle_rate_eps > 0 and self.hold_std > 0):
            raise DomainError("segmentation thresholds must be positive")
        if int(self.stable_window) != self.stable_window or self.stable_window < 1:
            raise DomainError("stable_window must be a positive integer")

    @property
    def run_length(self) -> int:
        """Consecutive samples of motion needed to start the approach."""
        return max(1, self.stable_window // 4)


@dataclass
class ValidationReport:
    label: str
    violations: list[str] = field(default_factory=list)
    no_contact: bool = False

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.passed and not self.no_contact:
            return "pass"
        parts = list(self.violations)
        if self.no_contact:
            parts.append("no-contact")
        return "; ".join(parts)


def validate_trial(trial: GraspTrial, f_on: float = 0.1) -> ValidationReport:
    report = ValidationReport(trial.label)
    forces, angles = trial.forces, trial.angles
    expected = trial.meta.n_samples
    if len(forces) != len(angles):
        report.violations.append(
            f"channel length mismatch: {len(forces)} force vs {len(angles)} angle samples"
        )
    for name, arr in (("force", forces), ("angle", angles)):
        if len(arr) != expected:
            report.violations.append(
                f"length violation: {len(arr)} {name} samples, expected {expected}"
            )
    if not np.all(np.isfinite(forces)) or not np.all(np.isfinite(angles)):
        report.violations.append("missing or non-finite samples")
    with np.errstate(invalid="ignore"):
        if np.any(forces < 0):
            report.violations.append(f"negative force, min {np.nanmin(forces):.6g} N")
        if np.any(angles < 0) or np.any(angles > MAX_COMBINED_ANGLE_DEG):
            report.violations.append(
                f"angle outside [0, {MAX_COMBINED_ANGLE_DEG:g}] deg "
                f"(range {np.nanmin(angles):.6g}..{np.nanmax(angles):.6g})"
            )
        report.no_contact = not np.any(forces >= f_on)
    return report


def _rate(x: np.ndarray, lag: int) -> np.ndarray:
    """Trailing difference quotient ``(x[t] - x[t - lag]) / lag``, clamped at the start."""
    past = np.concatenate([np.full(lag, x[0]), x[:-lag]]) if lag < len(x) else np.full_like(x, x[0])
    return (x - past) / lag


def _find_run(mask: np.ndarray, length: int, stop: int) -> int | None:
    """First index below ``stop`` that starts ``length`` consecutive True values."""
    run = 0
    for t in range(len(mask)):
        run = run + 1 if mask[t] else 0
        if run >= length:
            start = t - length + 1
            return start if start < stop else None
    return None


def segment_phases(trial: GraspTrial, cfg: SegmentationConfig | None = None) -> PhaseAnnotation:
    """Detect approach, grasp, lift and hold boundaries from the signals alone.

    grasp: first sample with any fingertip force at or above ``f_on``.
    approach: first sample of a run of ``stable_window // 4`` samples whose mean
        flexion rate exceeds ``angle_rate_eps``, before contact.
    lift: the total-force rate is followed through the grasp rise until it stays
        quiet for ``stable_window // 4`` samples; lift is the onset of the next excursion that beats the median
        grasp-rise rate.
    hold: first window of ``stable_window`` samples, starting at or after lift,
        whose per-channel standard deviation is below ``hold_std``.  The
        reported index is the window's first sample.
    """
    cfg = cfg or SegmentationConfig()
    forces = np.asarray(trial.forces, dtype=float)
    angles = np.asarray(trial.angles, dtype=float)
    n = len(forces)
    W = int(cfg.stable_window)

    touching = np.flatnonzero(forces.max(axis=1) >= cfg.f_on)
    if touching.size == 0:
        raise SegmentationError(f"{trial.label}: no contact, forces never reach {cfg.f_on} N")
    grasp = int(touching[0])

    mean_angle = angles.mean(axis=1)
    flex_rate = np.diff(mean_angle, prepend=mean_angle[0])
    approach = _find_run(flex_rate > cfg.angle_rate_eps, cfg.run_length, grasp)
    if approach is None:
        approach = grasp

    total = forces.sum(axis=1)
    lag = cfg.run_length
    rate = _rate(total, lag)
    tail = total[max(grasp, n - W):]
    noise_rate = 4.0 * tail.std() * np.sqrt(2.0) / lag

    end = min(n, grasp + 2 * W)
    peak_at = grasp + int(np.argmax(rate[grasp:end]))
    peak = max(rate[peak_at], 0.0)
    quiet = max(0.1 * peak, noise_rate)
    calm = _find_run(rate[peak_at:] <= quiet, lag, n)
    settle = peak_at + calm if calm is not None else n - 1
    active = rate[grasp:settle]
    reference = float(np.median(active)) if active.size else peak
    threshold = max(reference, 2.0 * quiet)

    excursion = np.flatnonzero(rate[settle:] > threshold)
    if excursion.size:
        lift = settle + int(excursion[0])
        while lift - 1 > settle and rate[lift - 1] > quiet:
            lift -= 1
    else:
        lift = settle

    if n - lift < W:
        raise UnstableHoldError(f"{trial.label}: no full stability window after lift", None)
    windows = sliding_window_view(forces[lift:], W, axis=0)  # (m, 5, W)
    spread = windows.std(axis=2).max(axis=1)
    steady = np.flatnonzero(spread < cfg.hold_std)
    if steady.size == 0:
        best = lift + int(np.argmin(spread))
        raise UnstableHoldError(
            f"{trial.label}: forces never settle below {cfg.hold_std} N "
            f"(best window at sample {best}, spread {spread.min():.4g} N)",
            best,
        )
    hold = lift + int(steady[0])
    return PhaseAnnotation(approach, grasp, lift, hold, n)


def trial_phases(trial: GraspTrial, cfg: SegmentationConfig | None = None) -> PhaseAnnotation:
    """Manual annotation from the trial metadata when present, detection otherwise."""
    ann = trial.meta.annotation
    if ann is not None:
        ann.check_length(len(trial))
        return ann
    return segment_phases(trial, cfg)


@dataclass(frozen=True)
class HoldFeatures:
    mean_forces: np.ndarray
    mean_angles: np.ndarray
    mean_posture: HandPosture
    total_force: float


def hold_features(trial: GraspTrial, ann: PhaseAnnotation) -> HoldFeatures:
    ann.check_length(len(trial))
    lo, hi = ann.hold_start, ann.hold_end
    if hi <= lo:
        raise DomainError("empty hold window")
    mean_forces = trial.forces[lo:hi].mean(axis=0)
    mean_angles = trial.angles[lo:hi].mean(axis=0)
    return HoldFeatures(
        mean_forces=mean_forces,
        mean_angles=mean_angles,
        mean_posture=HandPosture.from_flex(mean_angles),
        total_force=float(mean_forces.sum()),
    )
