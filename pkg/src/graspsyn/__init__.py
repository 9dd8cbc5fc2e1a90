"""Grasp synergy analysis for an instrumented data glove.

Sensor models, a hand kinematic model, trial segmentation, hold-phase
features, and synergy extraction (correlation, radar profiles, force-mass
interpolation, PCA, t-SNE), plus a seeded synthetic trial generator.
"""

__version__ = "0.1.0"

from .dataset import Dataset, TrialRecord, extract_features, feature_matrix
from .errors import (
    CalibrationRejectedError,
    ConfigError,
    DatasetError,
    DegenerateDataError,
    DomainError,
    GapClosureError,
    GraspError,
    InsufficientDataError,
    OutOfRangeError,
    ParseError,
    RomExceededError,
    SegmentationError,
    UndefinedCorrelationError,
    UnstableHoldError,
)
from .hand import (
    FINGERS,
    FingerId,
    GraspTrial,
    GraspType,
    HandPosture,
    JointAngles,
    ObjectSpec,
    PhaseAnnotation,
    TrialMeta,
    builtin_catalog,
    compose_joint_angles,
    decompose_flex_angle,
)
from .phases import SegmentationConfig, hold_features, segment_phases, trial_phases, validate_trial
from .synthetic import CorrelationTarget, GroundTruth, SyntheticConfig, generate_synthetic_trial

__all__ = [
    "Dataset",
    "TrialRecord",
    "extract_features",
    "feature_matrix",
    "CalibrationRejectedError",
    "ConfigError",
    "DatasetError",
    "DegenerateDataError",
    "DomainError",
    "GapClosureError",
    "GraspError",
    "InsufficientDataError",
    "OutOfRangeError",
    "ParseError",
    "RomExceededError",
    "SegmentationError",
    "UndefinedCorrelationError",
    "UnstableHoldError",
    "FINGERS",
    "FingerId",
    "GraspTrial",
    "GraspType",
    "HandPosture",
    "JointAngles",
    "ObjectSpec",
    "PhaseAnnotation",
    "TrialMeta",
    "builtin_catalog",
    "compose_joint_angles",
    "decompose_flex_angle",
    "SegmentationConfig",
    "hold_features",
    "segment_phases",
    "trial_phases",
    "validate_trial",
    "CorrelationTarget",
    "GroundTruth",
    "SyntheticConfig",
    "generate_synthetic_trial",
]
