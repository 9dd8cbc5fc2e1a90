"""Exception hierarchy shared by every graspsyn module."""


class GraspError(Exception):
    """Base class for all errors raised by graspsyn."""


class DomainError(GraspError, ValueError):
    """An argument lies outside the domain of the operation."""


class RomExceededError(DomainError):
    """A decomposed joint angle violates its anatomical range of motion."""

    def __init__(self, finger, joint, angle, limit):
        self.finger = finger
        self.joint = joint
        self.angle = angle
        self.limit = limit
        super().__init__(
            f"{finger.name} {joint} angle {angle:.3f} deg exceeds ROM limit {limit:g} deg"
        )


class GapClosureError(DomainError):
    """The applied force would close the capacitor gap."""


class CalibrationRejectedError(GraspError):
    """A calibration ramp does not describe a monotone sensor response."""


class OutOfRangeError(DomainError):
    """A reading lies too far outside the calibrated range to extrapolate."""


class SegmentationError(GraspError):
    """A trial cannot be split into movement phases."""


class UnstableHoldError(SegmentationError):
    """Forces never settle into a stable hold.

    ``best_candidate`` is the sample whose trailing window came closest to the
    stability threshold, or ``None`` when no window was available.
    """

    def __init__(self, message, best_candidate=None):
        super().__init__(message)
        self.best_candidate = best_candidate


class UndefinedCorrelationError(DomainError):
    """Pearson correlation is undefined because a series is constant."""


class DegenerateDataError(DomainError):
    """Data carry no variance to analyse."""


class InsufficientDataError(GraspError):
    """Too few distinct observations for the requested fit."""


class ConfigError(GraspError, ValueError):
    """An invalid generator or analysis configuration."""


class ParseError(GraspError):
    """A malformed input file. ``row`` is the 1-based line number when known."""

    def __init__(self, message, path=None, row=None):
        self.path = path
        self.row = row
        where = ""
        if path is not None:
            where += f"{path}"
        if row is not None:
            where += f":{row}"
        super().__init__(f"{where}: {message}" if where else message)


class DatasetError(GraspError):
    """Aggregated problems found while loading a dataset."""

    def __init__(self, problems):
        self.problems = list(problems)
        lines = "\n".join(f"  - {p}" for p in self.problems)
        super().__init__(f"{len(self.problems)} dataset problem(s):\n{lines}")
