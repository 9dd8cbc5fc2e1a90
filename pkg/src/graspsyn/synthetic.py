"""Seeded synthetic grasp trials with planted phases and synergies.

Every trial's hold target is ``base + basis @ z`` (10 channels: 5 flex
angles then 5 fingertip forces) where ``z`` is the grasp type's synergy
coefficient vector, scaled by object mass on the grip-force synergy and by a
bounded per-trial factor ``1 + s * u`` (``u`` uniform with unit variance).
Grasp types listed in ``force_gain`` scale the force rows of the basis (the
switch press is a light touch).  Gaussian hold noise is added on top.  With
the noise switched off the posture and the force hold vectors of a whole
dataset therefore each lie in an affine subspace of dimension ``rank``.

Time courses follow the protocol: the hand rests, flexes during the approach
while forces stay at zero, forces jump at contact and rise to the hold level,
overshoot while the object is lifted, and sit on a plateau from the hold
sample on.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError
from .hand import (
    MAX_FORCE_N,
    FingerId,
    GraspTrial,
    GraspType,
    ObjectSpec,
    TrialMeta,
    builtin_catalog,
)

__all__ = [
    "SyntheticConfig",
    "GroundTruth",
    "CorrelationTarget",
    "generate_synthetic_trial",
    "iter_grid",
    "onset_profile",
    "DEFAULT_BASIS",
    "DEFAULT_BASE",
    "DEFAULT_TYPE_COEFFICIENTS",
]

# columns: grip-force scaling, ulnar wrap, index isolation
DEFAULT_BASIS = np.array(
    [
        # flex angles [deg]
        [3.6, 12.8, 16.8],
        [6.0, 3.2, -16.8],
        [6.6, -1.6, 16.8],
        [6.6, -8.0, 14.4],
        [6.6, -11.2, 4.8],
        # fingertip forces [N]
        [0.5, 0.08, 0.0],
        [0.15, 0.08, 1.0],
        [0.125, 0.64, 0.0],
        [0.05, 0.8, 0.0],
        [0.025, 0.8, 0.0],
    ]
)
DEFAULT_BASE = np.array([20.0, 60.0, 40.0, 40.0, 40.0, 0.05, 0.05, 0.05, 0.05, 0.05])
DEFAULT_TYPE_COEFFICIENTS = {
    GraspType.PP: (1.0, 0.2, 1.2),
    GraspType.LP: (1.2, 0.3, 0.3),
    GraspType.DVG: (2.0, 1.0, 1.0),
    GraspType.CG: (3.0, 2.2, 0.1),
    GraspType.EG: (2.6, 0.8, 0.4),
    GraspType.TP: (1.5, 0.6, 0.8),
    GraspType.SG: (2.8, 1.8, 0.2),
    GraspType.H: (1.6, 2.6, 0.1),
    GraspType.PLATFORM: (0.3, 0.2, 0.1),
    GraspType.INDEX_POINTING: (0.2, 1.0, 1.8),
}
_LN9 = np.log(9.0)
_SQRT3 = np.sqrt(3.0)


def onset_profile(k: np.ndarray, rise: float, jump: float = 0.0) -> np.ndarray:
    """Transition that is 0 before ``k = 0`` and tends to 1.

    A logistic with a 10-90 % rise of ``rise`` samples, re-based to start
    exactly at zero, plus an immediate step of height ``jump`` at ``k = 0``.
    """
    k = np.asarray(k, dtype=float)
    w = rise / (2.0 * _LN9)
    mid = rise / 2.0
    logistic = lambda x: 1.0 / (1.0 + np.exp(-(x - mid) / w))  # noqa: E731
    l0 = logistic(-1.0)
    r = (logistic(k) - l0) / (1.0 - l0)
    r = jump + (1.0 - jump) * r
    return np.where(k >= 0, r, 0.0)


@dataclass(frozen=True)
class CorrelationTarget:
    """Pooled full-trial correlation to plant between two channels of a grasp type."""

    domain: str
    finger_a: FingerId
    finger_b: FingerId
    rho: float
    grasp_type: GraspType | None = None  # None: every type

    def __post_init__(self):
        if self.domain not in ("force", "posture"):
            raise ConfigError(f"unknown domain {self.domain!r}")
        if not (0.0 < self.rho < 1.0):
            raise ConfigError("planted correlation must lie in (0, 1)")
        if self.finger_a == self.finger_b:
            raise ConfigError("a correlation target needs two different fingers")


@dataclass(frozen=True)
class SyntheticConfig:
    """Generator settings.

    Timings are sample indices; ``timing_jitter`` shifts the whole schedule of
    each trial by a seeded integer in ``[-jitter, jitter]``.  ``force_noise``
    and ``angle_noise`` are per-sample measurement noise; the hold noise is
    per-trial, derived from ``snr_db`` unless given explicitly.
    """

    seed: int = 42
    n_subjects: int = 10
    trials_per_object: int = 1
    objects: tuple[ObjectSpec, ...] = field(default_factory=lambda: tuple(builtin_catalog()))
    scan_rate_hz: float = 40.0
    duration_s: float = 30.0
    approach_sample: int = 80
    contact_sample: int = 200
    lift_sample: int = 560
    hold_sample: int = 600
    timing_jitter: int = 0
    rise_samples: float = 40.0
    lift_rise_samples: float = 8.0
    base: tuple[float, ...] = tuple(DEFAULT_BASE)
    basis: tuple[tuple[float, ...], ...] = tuple(map(tuple, DEFAULT_BASIS))
    type_coefficients: dict = field(default_factory=lambda: dict(DEFAULT_TYPE_COEFFICIENTS))
    coefficient_spread: tuple[float, ...] = (0.2, 0.2, 0.25)
    mass_gain: float = 0.5
    force_noise: float = 0.02
    angle_noise: float = 0.2
    snr_db: float | None = 20.0
    hold_force_noise: float | None = None
    hold_angle_noise: float | None = None
    touch_fraction: float = 0.15
    touch_floor: float = 0.25
    lift_gain: float = 0.3
    lift_floor: float = 0.6
    lift_angle_gain: float = 0.02
    correlation_targets: tuple[CorrelationTarget, ...] = ()
    correlation_time: float = 40.0
    force_gain: dict = field(default_factory=lambda: {GraspType.INDEX_POINTING: 0.05})

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=float)
        if B.ndim != 2 or B.shape[0] != 10:
            raise ConfigError("basis must be a 10 x r matrix")
        if not (1 <= self.rank <= 5):
            raise ConfigError("planted rank must lie in 1..5")
        if len(self.base) != 10:
            raise ConfigError("base must have 10 channels")
        if len(self.coefficient_spread) != self.rank:
            raise ConfigError("one coefficient spread per synergy")
        for gt, z in self.type_coefficients.items():
            if len(z) != self.rank:
                raise ConfigError(f"{gt.value}: {len(z)} coefficients for rank {self.rank}")
        if not (0 <= self.approach_sample <= self.contact_sample < self.lift_sample < self.hold_sample):
            raise ConfigError("timings must satisfy approach <= contact < lift < hold")
        j = self.timing_jitter
        if j < 0 or self.approach_sample - j < 0:
            raise ConfigError("timing jitter would move the approach before the first sample")
        if self.hold_sample + j >= self.n_samples:
            raise ConfigError(
                f"hold sample {self.hold_sample}+{j} beyond trial length {self.n_samples}"
            )
        if any(g < 0 for g in self.force_gain.values()):
            raise ConfigError("force gains must be >= 0")
        for name in ("force_noise", "angle_noise", "hold_force_noise", "hold_angle_noise"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.n_subjects < 1 or self.trials_per_object < 1:
            raise ConfigError("need at least one subject and one trial per object")

    @property
    def rank(self) -> int:
        return np.asarray(self.basis).shape[1]

    @property
    def n_samples(self) -> int:
        return int(round(self.scan_rate_hz * self.duration_s))

    @property
    def subjects(self) -> list[str]:
        return [f"S{i + 1:02d}" for i in range(self.n_subjects)]

    def noiseless(self) -> "SyntheticConfig":
        return replace(
            self, force_noise=0.0, angle_noise=0.0, snr_db=None, hold_force_noise=0.0, hold_angle_noise=0.0
        )

    # -- planted structure -------------------------------------------------

    def type_mean_mass(self, grasp_type: GraspType) -> float:
        masses = [o.mass_g for o in self.objects if o.grasp_type is grasp_type and o.mass_g is not None]
        return float(np.mean(masses)) if masses else 0.0

    def object_coefficients(self, obj: ObjectSpec) -> np.ndarray:
        """Synergy coefficients of an object before per-trial variation."""
        try:
            z = np.array(self.type_coefficients[obj.grasp_type], dtype=float)
        except KeyError:
            raise ConfigError(f"no synergy coefficients for grasp type {obj.grasp_type.value}") from None
        if obj.mass_g is not None and self.mass_gain:
            ref = self.type_mean_mass(obj.grasp_type)
            z[0] *= 1.0 + self.mass_gain * (obj.mass_g - ref) / (ref + 100.0)
        return z

    def basis_for(self, grasp_type: GraspType) -> np.ndarray:
        """The basis with its force rows scaled by the type's force gain."""
        B = np.array(self.basis, dtype=float)
        B[5:] *= self.force_gain.get(grasp_type, 1.0)
        return B

    def type_mean(self, grasp_type: GraspType) -> np.ndarray:
        """Expected 10-channel hold vector of a grasp type (object average)."""
        objs = [o for o in self.objects if o.grasp_type is grasp_type]
        return np.mean([self._object_moments(o)[0] for o in objs], axis=0)

    def _factor_moments(self):
        s = np.asarray(self.coefficient_spread, dtype=float)
        return np.ones_like(s), s**2

    def _object_moments(self, obj: ObjectSpec):
        """Mean and covariance of the noise-free hold vector for one object."""
        B = self.basis_for(obj.grasp_type)
        z = self.object_coefficients(obj)
        mean_l, var_l = self._factor_moments()
        mean = np.asarray(self.base) + B @ (z * mean_l)
        cov = B @ np.diag(z**2 * var_l) @ B.T
        return mean, cov

    def signal_covariance(self) -> np.ndarray:
        """Population covariance of noise-free hold vectors over the trial grid."""
        moments = [self._object_moments(o) for o in self.objects]
        means = np.array([m for m, _ in moments])
        within = np.mean([c for _, c in moments], axis=0)
        between = np.cov(means.T, bias=True)
        return within + between

    def signal_trace(self, domain: str) -> float:
        sl = _domain_slice(domain)
        return float(np.trace(self.signal_covariance()[sl, sl]))

    def hold_noise(self, domain: str) -> float:
        explicit = self.hold_force_noise if domain == "force" else self.hold_angle_noise
        if explicit is not None:
            return float(explicit)
        if self.snr_db is None:
            return 0.0
        return float(np.sqrt(self.signal_trace(domain) / (5.0 * 10.0 ** (self.snr_db / 10.0))))

    def explained_bound(self, domain: str) -> float:
        """Lower bound on the top-``rank`` cumulative explained variance."""
        s = self.signal_trace(domain)
        return s / (s + 5.0 * self.hold_noise(domain) ** 2)

    # -- time courses ------------------------------------------------------

    def _schedule(self, shift: int) -> tuple[int, int, int, int]:
        return (
            self.approach_sample + shift,
            self.contact_sample + shift,
            self.lift_sample + shift,
            self.hold_sample + shift,
        )

    def angle_profile(self, shift: int = 0) -> np.ndarray:
        a, c, l, h = self._schedule(shift)
        t = np.arange(self.n_samples)
        s = 0.9 * onset_profile(t - a, self.rise_samples, 0.02) + 0.1 * onset_profile(t - c, self.rise_samples)
        return s * (1.0 + self.lift_angle_gain * self._lift_shape(t, l, h))

    def force_profile(self, shift: int = 0, jump: float | None = None, lift: float | None = None) -> np.ndarray:
        a, c, l, h = self._schedule(shift)
        t = np.arange(self.n_samples)
        jump = self.touch_fraction if jump is None else jump
        lift = self.lift_gain if lift is None else lift
        return onset_profile(t - c, self.rise_samples, jump) * (1.0 + lift * self._lift_shape(t, l, h))

    def _lift_shape(self, t, l, h):
        return np.where(t < h, onset_profile(t - l, self.lift_rise_samples, 0.3), 0.0)

    def _shifts(self) -> np.ndarray:
        return np.arange(-self.timing_jitter, self.timing_jitter + 1)


def _domain_slice(domain: str) -> slice:
    if domain == "posture":
        return slice(0, 5)
    if domain == "force":
        return slice(5, 10)
    raise ConfigError(f"unknown domain {domain!r}")


@dataclass(frozen=True)
class GroundTruth:
    """Planted values for one trial.

    ``hold_target`` = base + basis @ coefficients + hold_noise, with the force
    rows of the basis scaled by ``force_gain``, except on channels overridden
    by a correlation target (listed in ``overrides``).
    """

    approach_start: int
    grasp_start: int
    lift_start: int
    hold_start: int
    hold_end: int
    coefficients: np.ndarray
    hold_noise: np.ndarray
    hold_target: np.ndarray
    overrides: tuple[int, ...] = ()
    force_gain: float = 1.0

    @property
    def boundaries(self) -> tuple[int, int, int, int, int]:
        return (self.approach_start, self.grasp_start, self.lift_start, self.hold_start, self.hold_end)

    @property
    def hold_posture(self) -> np.ndarray:
        return self.hold_target[:5]

    @property
    def hold_forces(self) -> np.ndarray:
        return self.hold_target[5:]

    def as_dict(self) -> dict:
        return {
            "approach_start": self.approach_start,
            "grasp_start": self.grasp_start,
            "lift_start": self.lift_start,
            "hold_start": self.hold_start,
            "hold_end": self.hold_end,
            "coefficients": self.coefficients.tolist(),
            "hold_noise": self.hold_noise.tolist(),
            "hold_target": self.hold_target.tolist(),
            "overrides": list(self.overrides),
            "force_gain": self.force_gain,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroundTruth":
        return cls(
            d["approach_start"],
            d["grasp_start"],
            d["lift_start"],
            d["hold_start"],
            d["hold_end"],
            np.array(d["coefficients"], dtype=float),
            np.array(d["hold_noise"], dtype=float),
            np.array(d["hold_target"], dtype=float),
            tuple(d.get("overrides", ())),
            float(d.get("force_gain", 1.0)),
        )


def _trial_rng(cfg: SyntheticConfig, subject: str, obj: ObjectSpec, trial_index: int):
    tag = zlib.crc32(f"{subject}|{obj.slug}|{trial_index}".encode())
    return np.random.default_rng([cfg.seed, tag])


def _planted_spread(cfg: SyntheticConfig, target: CorrelationTarget, grasp_type: GraspType):
    """Scale and independent spread that give channel b the target pooled correlation with a."""
    sl = _domain_slice(target.domain)
    ia, ib = sl.start + int(target.finger_a), sl.start + int(target.finger_b)
    objs = [o for o in cfg.objects if o.grasp_type is grasp_type]
    sigma_h = cfg.hold_noise(target.domain)
    if target.domain == "force":
        sigma_h *= cfg.force_gain.get(grasp_type, 1.0)
    m1, m2 = [], []
    for o in objs:
        mean, cov = cfg._object_moments(o)
        m1.append(mean[ia])
        m2.append(mean[ia] ** 2 + cov[ia, ia] + sigma_h**2)
    M1, M2 = float(np.mean(m1)), float(np.mean(m2))
    mean_a = M1
    mean_b = float(np.mean([cfg._object_moments(o)[0][ib] for o in objs]))
    scale = mean_b / mean_a if mean_a > 0 else 1.0

    shifts = cfg._shifts()
    if target.domain == "posture":
        profiles = [cfg.angle_profile(s) for s in shifts]
        gates = [np.ones(cfg.n_samples)] * len(shifts)
        noise_var = cfg.angle_noise**2
    else:
        profiles = [cfg.force_profile(s) for s in shifts]
        gates = [(np.arange(cfg.n_samples) < cfg.hold_sample + s).astype(float) for s in shifts]
        frac = np.mean([(np.arange(cfg.n_samples) >= cfg.contact_sample + s).mean() for s in shifts])
        noise_var = cfg.force_noise**2 * frac
    S1 = float(np.mean([p.mean() for p in profiles]))
    S2 = float(np.mean([(p**2).mean() for p in profiles]))
    S2g = float(np.mean([(p**2 * g).mean() for p, g in zip(profiles, gates)]))
    K = M2 * S2 - M1**2 * S1**2
    rho = target.rho
    tau2 = (scale**2 * K**2 / (rho**2 * (K + noise_var)) - scale**2 * K - noise_var) / S2g
    if tau2 < 0:
        natural = scale * K / np.sqrt((K + noise_var) * (scale**2 * K + noise_var))
        raise ConfigError(
            f"{grasp_type.value} {target.domain} correlation {rho} is above the "
            f"natural pooled correlation {natural:.4f}"
        )
    return ia, ib, scale, float(np.sqrt(tau2))


def _ar1(rng, n: int, tau: float, corr_time: float) -> np.ndarray:
    """Stationary AR(1) sequence with standard deviation ``tau``."""
    phi = np.exp(-1.0 / corr_time)
    e = rng.normal(0.0, tau * np.sqrt(1.0 - phi**2), n)
    x = np.empty(n)
    x[0] = rng.normal(0.0, tau)
    for t in range(1, n):
        x[t] = phi * x[t - 1] + e[t]
    return x


def _wander(rng, n: int, level: float, tau: float, corr_time: float) -> np.ndarray:
    """Zero-mean fluctuation of standard deviation ``tau`` that never drops below ``-level``.

    ``level * (G - 1)`` with ``G`` a unit-mean lognormal driven by an AR(1)
    sequence, so a channel held at ``level`` stays nonnegative and clipping
    cannot bias its variance.
    """
    if level <= 0.0 or tau <= 0.0:
        return np.zeros(n)
    s2 = np.log1p((tau / level) ** 2)
    x = _ar1(rng, n, 1.0, corr_time)
    return level * np.expm1(np.sqrt(s2) * x - 0.5 * s2)


def generate_synthetic_trial(
    cfg: SyntheticConfig, subject: str, obj: ObjectSpec, trial_index: int = 1
) -> tuple[GraspTrial, GroundTruth]:
    """One trial and its planted truth; deterministic in (seed, subject, object, trial)."""
    rng = _trial_rng(cfg, subject, obj, trial_index)
    n = cfg.n_samples
    shift = int(rng.integers(-cfg.timing_jitter, cfg.timing_jitter + 1)) if cfg.timing_jitter else 0
    a, c, l, h = cfg._schedule(shift)

    B = cfg.basis_for(obj.grasp_type)
    spread = np.asarray(cfg.coefficient_spread, dtype=float)
    z = cfg.object_coefficients(obj) * (1.0 + spread * rng.uniform(-_SQRT3, _SQRT3, cfg.rank))
    noise = np.concatenate(
        [
            rng.normal(0.0, cfg.hold_noise("posture"), 5),
            rng.normal(0.0, cfg.hold_noise("force") * cfg.force_gain.get(obj.grasp_type, 1.0), 5),
        ]
    )
    target = np.asarray(cfg.base) + B @ z + noise

    extras = {}
    overrides = []
    for ct in cfg.correlation_targets:
        if ct.grasp_type is not None and ct.grasp_type is not obj.grasp_type:
            continue
        ia, ib, scale, tau = _planted_spread(cfg, ct, obj.grasp_type)
        target[ib] = scale * target[ia]
        extras[ib] = tau
        overrides.append(ib)
    target[:5] = np.clip(target[:5], 0.0, None)
    target[5:] = np.clip(target[5:], 0.0, MAX_FORCE_N)
    for ib, tau in extras.items():
        extras[ib] = _wander(rng, n, target[ib], tau, cfg.correlation_time)

    posture, force = target[:5], target[5:]
    top = force.max()
    jump = max(cfg.touch_fraction, cfg.touch_floor / top) if top > 0 else cfg.touch_fraction
    lift = max(cfg.lift_gain, cfg.lift_floor / top) if top > 0 else cfg.lift_gain
    s_angle = cfg.angle_profile(shift)
    s_force = cfg.force_profile(shift, min(jump, 1.0), lift)
    angles = s_angle[:, None] * posture[None, :]
    forces = s_force[:, None] * force[None, :]
    t = np.arange(n)
    for ib, wander in extras.items():
        if ib < 5:
            angles[:, ib] += s_angle * wander
        else:
            forces[:, ib - 5] += s_force * (t < h) * wander

    if cfg.angle_noise:
        angles = angles + rng.normal(0.0, cfg.angle_noise, angles.shape)
    if cfg.force_noise:
        touching = (t >= c)[:, None]
        forces = forces + touching * rng.normal(0.0, cfg.force_noise, forces.shape)
    angles = np.clip(angles, 0.0, None)
    forces = np.clip(forces, 0.0, MAX_FORCE_N)

    meta = TrialMeta(subject, obj, trial_index, cfg.scan_rate_hz, cfg.duration_s)
    gain = float(cfg.force_gain.get(obj.grasp_type, 1.0))
    truth = GroundTruth(a, c, l, h, n, z, noise, target, tuple(overrides), gain)
    return GraspTrial(meta, forces, angles), truth


def iter_grid(cfg: SyntheticConfig):
    """(subject, object, trial_index) in canonical generation order."""
    for subject in cfg.subjects:
        for obj in cfg.objects:
            for k in range(1, cfg.trials_per_object + 1):
                yield subject, obj, k
