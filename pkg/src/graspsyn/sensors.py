"""Flex-sensor divider and capacitive force-sensor models.

Each sensor family has a forward direction (used by the simulator) and an
inverse direction (used on measurements).  All functions accept scalars or
numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CalibrationRejectedError, DomainError, GapClosureError, OutOfRangeError
from .hand import FINGERS

__all__ = [
    "VoltageDividerConfig",
    "FlexCalibration",
    "CapacitiveSensorModel",
    "ForceCalibration",
    "AngleReading",
    "ForceReading",
    "divider_output",
    "resistance_from_voltage",
    "resistance_to_angle",
    "angle_to_resistance",
    "adc_quantize",
    "adc_to_voltage",
    "capacitance_of_force",
    "force_ramp",
    "fit_force_calibration",
    "force_from_capacitance",
    "FLEX_PRESETS",
    "EXTRAPOLATION_LIMIT",
    "HandCalibration",
]

FULL_FLEX_DEG = 90.0
EXTRAPOLATION_LIMIT = 0.05  # fraction of the knot range
PROTOCOL_FORCE_SPAN_N = 15.0


def _out(x):
    """Return a float for 0-d input, the array otherwise."""
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class VoltageDividerConfig:
    """Flex sensor to supply, pull-down resistor to ground, output across the pull-down."""

    v_cc: float = 5.0
    r_pulldown: float = 47e3

    def __post_init__(self):
        if not (self.v_cc > 0 and self.r_pulldown > 0):
            raise DomainError("v_cc and r_pulldown must be positive")


def divider_output(cfg: VoltageDividerConfig, r_flex):
    r = np.asarray(r_flex, dtype=float)
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise DomainError("flex resistance must be finite and >= 0")
    return _out(cfg.v_cc * cfg.r_pulldown / (cfg.r_pulldown + r))


def resistance_from_voltage(cfg: VoltageDividerConfig, v_out):
    v = np.asarray(v_out, dtype=float)
    if np.any(v <= 0) or np.any(v > cfg.v_cc) or not np.all(np.isfinite(v)):
        raise DomainError(f"divider output must lie in (0, {cfg.v_cc}] V")
    return _out(cfg.r_pulldown * (cfg.v_cc - v) / v)


def adc_quantize(cfg: VoltageDividerConfig, v, bits: int = 10):
    """Microcontroller ADC counts for voltage ``v`` over ``[0, v_cc]``."""
    levels = 2**bits - 1
    v = np.clip(np.asarray(v, dtype=float), 0.0, cfg.v_cc)
    counts = np.rint(v / cfg.v_cc * levels).astype(int)
    return int(counts) if counts.ndim == 0 else counts


def adc_to_voltage(cfg: VoltageDividerConfig, counts, bits: int = 10):
    return _out(np.asarray(counts, dtype=float) * cfg.v_cc / (2**bits - 1))


@dataclass(frozen=True)
class FlexCalibration:
    """Two-point anchors: resistance when flat (0 deg) and fully bent (90 deg)."""

    r_flat: float = 25e3
    r_full: float = 100e3

    def __post_init__(self):
        if not (0 < self.r_flat < self.r_full):
            raise DomainError("need 0 < r_flat < r_full")


FLEX_PRESETS = {
    "glove": FlexCalibration(25e3, 100e3),
    # datasheet values: 10k flat, bend range topping out at 110k
    "datasheet": FlexCalibration(10e3, 110e3),
}


class AngleReading(NamedTuple):
    angle: float | np.ndarray
    clamped: bool | np.ndarray


def resistance_to_angle(cal: FlexCalibration, r) -> AngleReading:
    """Linear map ``r_flat -> 0 deg``, ``r_full -> 90 deg``, saturating at both ends."""
    r = np.asarray(r, dtype=float)
    raw = (r - cal.r_flat) / (cal.r_full - cal.r_flat) * FULL_FLEX_DEG
    angle = np.clip(raw, 0.0, FULL_FLEX_DEG)
    clamped = (raw < 0.0) | (raw > FULL_FLEX_DEG)
    if angle.ndim == 0:
        return AngleReading(float(angle), bool(clamped))
    return AngleReading(angle, clamped)


def angle_to_resistance(cal: FlexCalibration, angle):
    """Forward model used by the simulator; the linear map extended both ways."""
    a = np.asarray(angle, dtype=float)
    return _out(cal.r_flat + a / FULL_FLEX_DEG * (cal.r_full - cal.r_flat))


@dataclass(frozen=True)
class CapacitiveSensorModel:
    """Parallel-plate cell whose gap closes like a linear spring.

    ``c0`` is the unloaded capacitance ``eps * A / d0``.
    """

    c0: float = 10e-12
    d0: float = 1e-3
    k_spring: float = 4e4

    def __post_init__(self):
        if not (self.c0 > 0 and self.d0 > 0 and self.k_spring > 0):
            raise DomainError("c0, d0 and k_spring must be positive")

    @classmethod
    def from_geometry(cls, permittivity: float, area: float, d0: float, k_spring: float):
        return cls(permittivity * area / d0, d0, k_spring)

    @property
    def closing_force(self) -> float:
        return self.k_spring * self.d0


def capacitance_of_force(model: CapacitiveSensorModel, f):
    f = np.asarray(f, dtype=float)
    if np.any(f < 0) or not np.all(np.isfinite(f)):
        raise DomainError("force must be finite and >= 0")
    if np.any(f >= model.closing_force):
        raise GapClosureError(
            f"force reaches the gap-closing load {model.closing_force:g} N"
        )
    gap = model.d0 - f / model.k_spring
    return _out(model.c0 * model.d0 / gap)


def force_ramp(model: CapacitiveSensorModel, f_max: float = 20.0, n: int = 50):
    """Load-cell ramp ``[(C(f), f), ...]`` from 0 to ``f_max`` newtons."""
    forces = np.linspace(0.0, f_max, n)
    caps = np.asarray(capacitance_of_force(model, forces))
    return list(zip(caps.tolist(), forces.tolist()))


@dataclass(frozen=True)
class ForceCalibration:
    """Piecewise-linear capacitance to force map."""

    capacitance: tuple[float, ...]
    force: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.capacitance)
        f = tuple(float(v) for v in self.force)
        if len(c) != len(f) or len(c) < 2:
            raise CalibrationRejectedError("need at least two (capacitance, force) knots")
        if np.any(np.diff(c) <= 0):
            raise CalibrationRejectedError("knot capacitances must strictly increase")
        if np.any(np.diff(f) <= 0):
            raise CalibrationRejectedError("knot forces must strictly increase")
        object.__setattr__(self, "capacitance", c)
        object.__setattr__(self, "force", f)

    @property
    def knots(self) -> list[tuple[float, float]]:
        return list(zip(self.capacitance, self.force))

    @property
    def covers_protocol_range(self) -> bool:
        """True when the ramp spans at least 15 N, as a full load-cell ramp does."""
        return self.force[-1] - self.force[0] >= PROTOCOL_FORCE_SPAN_N


def fit_force_calibration(ramp: Sequence[tuple[float, float]]) -> ForceCalibration:
    """Turn load-cell ramp samples into calibration knots."""
    pts = sorted((float(c), float(f)) for c, f in ramp)
    if len(pts) < 2:
        raise CalibrationRejectedError("a calibration ramp needs at least two samples")
    caps = [c for c, _ in pts]
    forces = [f for _, f in pts]
    if len(set(caps)) != len(caps):
        raise CalibrationRejectedError("ramp capacitances must be distinct")
    bad = [i for i in range(1, len(forces)) if forces[i] <= forces[i - 1]]
    if bad:
        i = bad[0]
        raise CalibrationRejectedError(
            f"force does not increase with capacitance at C={caps[i]:.6g} "
            f"({forces[i - 1]:.6g} N -> {forces[i]:.6g} N)"
        )
    return ForceCalibration(tuple(caps), tuple(forces))


class ForceReading(NamedTuple):
    force: float | np.ndarray
    extrapolated: bool | np.ndarray


def force_from_capacitance(cal: ForceCalibration, c) -> ForceReading:
    """Interpolate force; up to 5 % of the knot range beyond either end is extrapolated."""
    c = np.asarray(c, dtype=float)
    xs = np.asarray(cal.capacitance)
    ys = np.asarray(cal.force)
    span = xs[-1] - xs[0]
    lo, hi = xs[0] - EXTRAPOLATION_LIMIT * span, xs[-1] + EXTRAPOLATION_LIMIT * span
    if np.any(c < lo) or np.any(c > hi) or not np.all(np.isfinite(c)):
        raise OutOfRangeError(
            f"capacitance outside calibrated range [{xs[0]:.6g}, {xs[-1]:.6g}] F by more than 5%"
        )
    force = np.interp(c, xs, ys)
    below = c < xs[0]
    above = c > xs[-1]
    slope_lo = (ys[1] - ys[0]) / (xs[1] - xs[0])
    slope_hi = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
    force = np.where(below, ys[0] + slope_lo * (c - xs[0]), force)
    force = np.where(above, ys[-1] + slope_hi * (c - xs[-1]), force)
    extrapolated = below | above
    if force.ndim == 0:
        return ForceReading(float(force), bool(extrapolated))
    return ForceReading(force, extrapolated)


@dataclass(frozen=True)
class HandCalibration:
    """Everything needed to turn raw glove readings into angles and forces.

    ``flex`` and ``force`` hold one entry per finger, thumb first.  A finger
    without a force calibration has ``None``.
    """

    divider: VoltageDividerConfig = field(default_factory=VoltageDividerConfig)
    flex: tuple[FlexCalibration, ...] = field(default_factory=lambda: (FlexCalibration(),) * 5)
    force: tuple[ForceCalibration | None, ...] = (None,) * 5

    def __post_init__(self):
        if len(self.flex) != len(FINGERS) or len(self.force) != len(FINGERS):
            raise DomainError("one flex and one force calibration slot per finger")
