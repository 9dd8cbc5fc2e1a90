"""Grasp taxonomy, object catalog and the single-sensor finger kinematic model.

A dorsal flex sensor reports one combined flexion per digit.  For the four
fingers the joints are coupled as ``PIP = 3/4 MCP`` and ``DIP = 2/3 MCP``,
so a total flexion ``theta`` splits as ``(12, 9, 8) / 29 * theta``.  The thumb
is modelled with MCP and IP only (``IP = 1/2 MCP``), giving ``(2, 1) / 3``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, RomExceededError

__all__ = [
    "FingerId",
    "FINGERS",
    "GraspType",
    "ObjectSpec",
    "JointAngles",
    "HandPosture",
    "FingertipForces",
    "PhaseAnnotation",
    "TrialMeta",
    "GraspTrial",
    "decompose_flex_angle",
    "compose_joint_angles",
    "decompose_angles",
    "posture_labels",
    "builtin_catalog",
    "lookup_object",
    "PIP_ROM_DEG",
    "DIP_ROM_DEG",
    "MAX_FORCE_N",
    "MAX_OBJECT_MASS_G",
    "PROTOCOL_RATE_HZ",
    "PROTOCOL_DURATION_S",
]

PIP_ROM_DEG = 110.0
DIP_ROM_DEG = 90.0
MAX_FORCE_N = 19.6  # 2 kg sensor range
MAX_OBJECT_MASS_G = 1500.0
PROTOCOL_RATE_HZ = 40.0
PROTOCOL_DURATION_S = 30.0

# joint share of the combined flexion
_FINGER_SPLIT = (12.0 / 29.0, 9.0 / 29.0, 8.0 / 29.0)
_THUMB_SPLIT = (2.0 / 3.0, 1.0 / 3.0)


class FingerId(enum.IntEnum):
    """Digits in canonical order; every 5-vector in the package uses it."""

    THUMB = 0
    INDEX = 1
    MIDDLE = 2
    RING = 3
    PINKY = 4

    @property
    def label(self) -> str:
        return self.name.capitalize()


FINGERS = tuple(FingerId)


class GraspType(enum.Enum):
    PP = "PP"
    LP = "LP"
    DVG = "DVG"
    CG = "CG"
    EG = "EG"
    TP = "TP"
    SG = "SG"
    H = "H"
    PLATFORM = "Platform"
    INDEX_POINTING = "IndexPointing"

    @property
    def full_name(self) -> str:
        return _GRASP_NAMES[self]

    @property
    def is_grasp(self) -> bool:
        """False for the two non-grasp postures, which carry no grasp-force meaning."""
        return self not in (GraspType.PLATFORM, GraspType.INDEX_POINTING)

    @property
    def is_power(self) -> bool:
        return self in (GraspType.SG, GraspType.CG, GraspType.EG, GraspType.H)

    @property
    def is_precision(self) -> bool:
        return self in (GraspType.TP, GraspType.LP, GraspType.PP, GraspType.DVG)

    @property
    def order(self) -> int:
        return _GRASP_ORDER[self]

    @classmethod
    def parse(cls, text: str) -> "GraspType":
        key = text.strip()
        for gt in cls:
            if key.lower() in (gt.value.lower(), gt.name.lower(), gt.full_name.lower()):
                return gt
        raise DomainError(f"unknown grasp type {text!r}")


_GRASP_NAMES = {
    GraspType.PP: "Pulp Pinch",
    GraspType.LP: "Lateral Pinch",
    GraspType.DVG: "Diagonal Volar Grip",
    GraspType.CG: "Cylindrical Grip",
    GraspType.EG: "Extension Grip",
    GraspType.TP: "Tripod Pinch",
    GraspType.SG: "Spherical Grasp",
    GraspType.H: "Hook Grasp",
    GraspType.PLATFORM: "Platform",
    GraspType.INDEX_POINTING: "Index Pointing",
}
_GRASP_ORDER = {gt: i for i, gt in enumerate(GraspType)}


@dataclass(frozen=True)
class ObjectSpec:
    name: str
    grasp_type: GraspType
    mass_g: float | None = None

    def __post_init__(self):
        if self.mass_g is not None:
            if not (0.0 <= self.mass_g < MAX_OBJECT_MASS_G):
                raise DomainError(
                    f"{self.name}: mass {self.mass_g} g outside [0, {MAX_OBJECT_MASS_G:g})"
                )

    @property
    def slug(self) -> str:
        """Filesystem-safe identifier, unique across the builtin catalog."""
        base = "".join(c if c.isalnum() else "-" for c in self.name.lower()).strip("-")
        return f"{self.grasp_type.value.lower()}_{base}"


# Table of the 26 protocol tasks (25 distinct objects; the plate serves both
# the extension grip and the platform posture).  Names keep their printed spelling.
_CATALOG = (
    ("Skillet lid", GraspType.H, 220.03),
    ("Apple", GraspType.SG, 158.01),
    ("Large Marker", GraspType.TP, 12.16),
    ("Plate", GraspType.EG, 453.26),
    ("Chips Can", GraspType.CG, 107.27),
    ("Screwdriver", GraspType.DVG, 68.8),
    ("Bowl", GraspType.LP, 167.67),
    ("Small Marker", GraspType.PP, 7.67),
    ("Switch", GraspType.INDEX_POINTING, None),
    ("Pitcher base", GraspType.H, 197.82),
    ("Mini Soccer ball", GraspType.SG, 16.89),
    ("Tuna Can", GraspType.TP, 132.59),
    ("Craker Box", GraspType.EG, 388.34),
    ("Coffee Can", GraspType.CG, 174.42),
    ("Spatula", GraspType.DVG, 19.72),
    ("XS Clamp", GraspType.LP, 57.12),
    ("Plastic Peer", GraspType.PP, 11.01),
    ("Plate", GraspType.PLATFORM, 453.26),
    ("Coffee Cup", GraspType.H, 303.48),
    ("Softball", GraspType.SG, 59.54),
    ("Table Tennis Ball", GraspType.TP, 2.74),
    ("Tetra Pack", GraspType.EG, 174.94),
    ("Power Drill", GraspType.CG, 450.07),
    ("Skillet", GraspType.DVG, 549.11),
    ("Key", GraspType.LP, 3.83),
    ("Washer", GraspType.PP, 2.3),
)


def builtin_catalog() -> list[ObjectSpec]:
    """The protocol object list in table order."""
    return [ObjectSpec(name, gt, mass) for name, gt, mass in _CATALOG]


def lookup_object(name: str, grasp_type: GraspType | None = None) -> ObjectSpec:
    """Find a catalog entry by (case-insensitive) name.

    ``grasp_type`` disambiguates names used by more than one task ("Plate").
    Without it the first table entry wins.
    """
    key = name.strip().lower()
    for obj in builtin_catalog():
        if obj.name.lower() == key and (grasp_type is None or obj.grasp_type is grasp_type):
            return obj
    raise KeyError(name)


class JointAngles(NamedTuple):
    """Joint flexion of one digit in degrees.

    For the thumb ``pip`` holds the IP joint and ``dip`` is ``None``.
    """

    mcp: float
    pip: float
    dip: float | None = None

    @property
    def ip(self) -> float:
        return self.pip

    @property
    def total(self) -> float:
        return self.mcp + self.pip + (self.dip or 0.0)


def _check_rom(finger: FingerId, joints: JointAngles) -> None:
    for name, value in zip(("MCP", "PIP", "DIP"), joints):
        if value is not None and value < 0:
            raise DomainError(f"{finger.label} {name} angle must be >= 0, got {value}")
    if finger is FingerId.THUMB:
        return
    if joints.pip > PIP_ROM_DEG:
        raise RomExceededError(finger, "PIP", joints.pip, PIP_ROM_DEG)
    if joints.dip is not None and joints.dip > DIP_ROM_DEG:
        raise RomExceededError(finger, "DIP", joints.dip, DIP_ROM_DEG)


def decompose_flex_angle(finger: FingerId, theta_total: float) -> JointAngles:
    """Split a combined flex reading into per-joint angles.

    Raises ``DomainError`` for negative input and ``RomExceededError`` when the
    PIP or DIP share leaves its anatomical range.
    """
    finger = FingerId(finger)
    theta = float(theta_total)
    if not np.isfinite(theta) or theta < 0:
        raise DomainError(f"combined flex angle must be finite and >= 0, got {theta_total}")
    if finger is FingerId.THUMB:
        mcp, ip = (theta * s for s in _THUMB_SPLIT)
        joints = JointAngles(mcp, ip)
    else:
        joints = JointAngles(*(theta * s for s in _FINGER_SPLIT))
    _check_rom(finger, joints)
    return joints


def compose_joint_angles(finger: FingerId, joints: Sequence[float]) -> float:
    """Inverse of :func:`decompose_flex_angle`: the joint-angle sum."""
    finger = FingerId(finger)
    values = [v for v in joints if v is not None]
    expected = 2 if finger is FingerId.THUMB else 3
    if len(values) != expected:
        raise DomainError(f"{finger.label} takes {expected} joint angles, got {len(values)}")
    return float(sum(values))


def decompose_angles(theta: np.ndarray) -> np.ndarray:
    """Vectorised decomposition of ``(..., 5)`` combined angles to ``(..., 15)``.

    Output columns follow :func:`posture_labels`; the thumb DIP slot is zero.
    No ROM check is made here.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape[-1] != 5:
        raise DomainError(f"expected 5 finger channels, got shape {theta.shape}")
    out = np.zeros(theta.shape[:-1] + (15,))
    out[..., 0] = theta[..., 0] * _THUMB_SPLIT[0]
    out[..., 1] = theta[..., 0] * _THUMB_SPLIT[1]
    for f in range(1, 5):
        for j, share in enumerate(_FINGER_SPLIT):
            out[..., 3 * f + j] = theta[..., f] * share
    return out


def posture_labels() -> list[str]:
    """Labels of the 15 joint spokes (thumb IP sits in the PIP slot)."""
    labels = []
    for finger in FINGERS:
        if finger is FingerId.THUMB:
            labels += ["Thumb MCP", "Thumb IP", "Thumb DIP (n/a)"]
        else:
            labels += [f"{finger.label} {j}" for j in ("MCP", "PIP", "DIP")]
    return labels


@dataclass(frozen=True)
class HandPosture:
    """Per-digit joint angles, canonical finger order."""

    joints: tuple[JointAngles, ...]

    def __post_init__(self):
        if len(self.joints) != 5:
            raise DomainError("a hand posture has exactly five digits")
        joints = tuple(JointAngles(*j) for j in self.joints)
        object.__setattr__(self, "joints", joints)
        for finger, j in zip(FINGERS, joints):
            if (finger is FingerId.THUMB) != (j.dip is None):
                raise DomainError(f"{finger.label}: thumb has no DIP, fingers need one")
            _check_rom(finger, j)

    @classmethod
    def from_flex(cls, theta: Sequence[float]) -> "HandPosture":
        if len(theta) != 5:
            raise DomainError("need one combined angle per digit")
        return cls(tuple(decompose_flex_angle(f, t) for f, t in zip(FINGERS, theta)))

    def __getitem__(self, finger: FingerId) -> JointAngles:
        return self.joints[int(finger)]

    def totals(self) -> np.ndarray:
        return np.array([compose_joint_angles(f, j) for f, j in zip(FINGERS, self.joints)])

    def spokes(self) -> np.ndarray:
        """15-vector in :func:`posture_labels` order."""
        out = []
        for j in self.joints:
            out += [j.mcp, j.pip, j.dip if j.dip is not None else 0.0]
        return np.array(out)


@dataclass(frozen=True)
class FingertipForces:
    force_n: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.force_n)
        if len(values) != 5:
            raise DomainError("need one force per fingertip")
        for v in values:
            if not (0.0 <= v <= MAX_FORCE_N):
                raise DomainError(f"fingertip force {v} N outside [0, {MAX_FORCE_N}]")
        object.__setattr__(self, "force_n", values)

    @property
    def total(self) -> float:
        return sum(self.force_n)


@dataclass(frozen=True)
class PhaseAnnotation:
    """Sample indices of the movement-phase boundaries; ``hold_end`` is exclusive."""

    approach_start: int
    grasp_start: int
    lift_start: int
    hold_start: int
    hold_end: int

    def __post_init__(self):
        b = self.as_tuple()
        if any(int(v) != v for v in b):
            raise DomainError("phase boundaries are integer sample indices")
        object.__setattr__(self, "approach_start", int(self.approach_start))
        object.__setattr__(self, "grasp_start", int(self.grasp_start))
        object.__setattr__(self, "lift_start", int(self.lift_start))
        object.__setattr__(self, "hold_start", int(self.hold_start))
        object.__setattr__(self, "hold_end", int(self.hold_end))
        a, g, l, h, e = self.as_tuple()
        if not (0 <= a <= g <= l <= h < e):
            raise DomainError(f"phase boundaries out of order: {b}")

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.approach_start, self.grasp_start, self.lift_start, self.hold_start, self.hold_end)

    def as_dict(self) -> dict[str, int]:
        keys = ("approach_start", "grasp_start", "lift_start", "hold_start", "hold_end")
        return dict(zip(keys, self.as_tuple()))

    def check_length(self, n_samples: int) -> None:
        if self.hold_end > n_samples:
            raise DomainError(f"hold_end {self.hold_end} beyond trial length {n_samples}")


@dataclass(frozen=True)
class TrialMeta:
    subject_id: str
    object: ObjectSpec
    trial_index: int = 1
    scan_rate_hz: float = PROTOCOL_RATE_HZ
    duration_s: float = PROTOCOL_DURATION_S
    annotation: PhaseAnnotation | None = None
    video: str | None = None

    def __post_init__(self):
        if self.trial_index < 1:
            raise DomainError("trial_index starts at 1")
        if self.scan_rate_hz <= 0 or self.duration_s <= 0:
            raise DomainError("scan rate and duration must be positive")

    @property
    def grasp_type(self) -> GraspType:
        return self.object.grasp_type

    @property
    def n_samples(self) -> int:
        return int(round(self.scan_rate_hz * self.duration_s))

    @property
    def key(self) -> tuple:
        """Sort/identity key: (subject, grasp type, object, trial)."""
        return (self.subject_id, self.grasp_type.order, self.object.name, self.trial_index)


@dataclass(frozen=True, eq=False)
class GraspTrial:
    """One recording: ``forces`` and ``angles`` are ``(n_samples, 5)`` arrays."""

    meta: TrialMeta
    forces: np.ndarray = field(repr=False)
    angles: np.ndarray = field(repr=False)

    def __post_init__(self):
        forces = np.array(self.forces, dtype=float)
        angles = np.array(self.angles, dtype=float)
        for name, arr in (("forces", forces), ("angles", angles)):
            if arr.ndim != 2 or arr.shape[1] != 5:
                raise DomainError(f"{name} must have shape (n, 5), got {arr.shape}")
        forces.setflags(write=False)
        angles.setflags(write=False)
        object.__setattr__(self, "forces", forces)
        object.__setattr__(self, "angles", angles)

    def __len__(self) -> int:
        return len(self.forces)

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.forces)) / self.meta.scan_rate_hz

    @property
    def label(self) -> str:
        m = self.meta
        return f"{m.subject_id}/{m.object.slug}/{m.trial_index}"
