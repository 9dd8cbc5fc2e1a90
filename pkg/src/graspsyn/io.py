"""Trial CSV files, dataset manifests, ground-truth sidecars and calibration files.

Layout of a dataset directory::

    manifest.json          version, subjects, one entry per trial
    ground_truth.json      planted values (synthetic datasets only)
    S01/pp_washer_1.csv    one file per trial

Manifest and sidecar are JSON; calibration files are INI-style key/value
text.  Every number is written with Python's locale-independent formatting.
"""

from __future__ import annotations

import configparser
import csv
import itertools
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import Dataset
from .errors import DatasetError, GraspError, ParseError
from .hand import FINGERS, GraspTrial, GraspType, ObjectSpec, PhaseAnnotation, TrialMeta
from .phases import validate_trial
from .sensors import FlexCalibration, ForceCalibration, HandCalibration, VoltageDividerConfig
from .synthetic import GroundTruth, SyntheticConfig, generate_synthetic_trial, iter_grid

__all__ = [
    "TRIAL_CSV_HEADER",
    "MANIFEST_NAME",
    "GROUND_TRUTH_NAME",
    "FORMAT_VERSION",
    "ManifestEntry",
    "Manifest",
    "write_trial_csv",
    "read_trial_csv",
    "read_trial_columns",
    "write_manifest",
    "read_manifest",
    "load_dataset",
    "generate_synthetic_dataset",
    "read_ground_truth",
    "write_calibration",
    "read_calibration",
]

TRIAL_CSV_HEADER = (
    "t_s",
    "f_thumb",
    "f_index",
    "f_middle",
    "f_ring",
    "f_pinky",
    "a_thumb",
    "a_index",
    "a_middle",
    "a_ring",
    "a_pinky",
)
MANIFEST_NAME = "manifest.json"
GROUND_TRUTH_NAME = "ground_truth.json"
FORMAT_VERSION = 1
_TIME_TOL = 1e-6


def _num(x: float) -> str:
    """Shortest decimal that round-trips to 10 significant digits; never locale-dependent."""
    return format(float(x), ".10g")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    """Canonical JSON text used for every structured record."""
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


# -- trial CSV ----------------------------------------------------------------


def trial_csv_text(trial: GraspTrial) -> str:
    rate = trial.meta.scan_rate_hz
    lines = [",".join(TRIAL_CSV_HEADER)]
    for i, (f, a) in enumerate(zip(trial.forces, trial.angles)):
        cells = [format(i / rate, ".6f")] + [_num(v) for v in f] + [_num(v) for v in a]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_trial_csv(trial: GraspTrial, path) -> Path:
    path = Path(path)
    _atomic_write(path, trial_csv_text(trial))
    return path


def read_trial_columns(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parse a trial CSV into ``(t, forces, angles)`` without any metadata.

    Row numbers in errors are 1-based file lines (the header is line 1).
    """
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open trial file: {exc.strerror}", path) from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("empty file", path, 1)
        header = [h.strip() for h in header]
        unknown = [h for h in header if h not in TRIAL_CSV_HEADER]
        if unknown:
            raise ParseError(f"unknown column(s) {', '.join(unknown)}", path, 1)
        if tuple(header) != TRIAL_CSV_HEADER:
            missing = [h for h in TRIAL_CSV_HEADER if h not in header]
            detail = f"missing {', '.join(missing)}" if missing else "columns out of order"
            raise ParseError(f"malformed header ({detail})", path, 1)
        rows, lines = [], []
        for line_no, row in enumerate(reader, start=2):
            if not any(row):
                continue
            if len(row) != len(TRIAL_CSV_HEADER):
                raise ParseError(f"expected {len(TRIAL_CSV_HEADER)} cells, got {len(row)}", path, line_no)
            rows.append(row)
            lines.append(line_no)
    if not rows:
        raise ParseError("no data rows", path, 2)
    try:
        data = np.fromiter(map(float, itertools.chain.from_iterable(rows)), float).reshape(len(rows), -1)
    except ValueError:
        # slow path only to locate the offending cell
        for line_no, row in zip(lines, rows):
            for col, cell in zip(TRIAL_CSV_HEADER, row):
                try:
                    float(cell)
                except ValueError:
                    raise ParseError(f"non-numeric value {cell!r} in column {col}", path, line_no) from None
        raise
    bad = np.argwhere(~np.isfinite(data))
    if bad.size:
        i, j = bad[0]
        raise ParseError(
            f"non-finite value {rows[i][j]!r} in column {TRIAL_CSV_HEADER[j]}", path, lines[i]
        )
    t = data[:, 0]
    back = np.flatnonzero(np.diff(t) <= 0)
    if back.size:
        i = int(back[0]) + 1
        raise ParseError(f"time not strictly increasing ({t[i - 1]:g} then {t[i]:g})", path, lines[i])
    return data[:, 0], data[:, 1:6], data[:, 6:11]


def read_trial_csv(path, meta: TrialMeta) -> GraspTrial:
    """Read a trial file and attach ``meta``; sample times must match its scan rate."""
    t, forces, angles = read_trial_columns(path)
    expected = np.arange(len(t)) / meta.scan_rate_hz
    off = np.flatnonzero(np.abs(t - expected) > _TIME_TOL)
    if off.size:
        i = int(off[0])
        raise ParseError(
            f"time {t[i]:g} s does not match {meta.scan_rate_hz:g} Hz sampling (expected {expected[i]:g} s)",
            path,
            i + 2,
        )
    return GraspTrial(meta, forces, angles)


# -- manifest -----------------------------------------------------------------


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    meta: TrialMeta

    def to_json(self) -> dict:
        m = self.meta
        return {
            "file": self.file,
            "subject": m.subject_id,
            "object": m.object.name,
            "grasp_type": m.grasp_type.value,
            "mass_g": m.object.mass_g,
            "trial_index": m.trial_index,
            "scan_rate_hz": m.scan_rate_hz,
            "duration_s": m.duration_s,
            "annotation": m.annotation.as_dict() if m.annotation else None,
            "video": m.video,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ManifestEntry":
        ann = d.get("annotation")
        obj = ObjectSpec(d["object"], GraspType.parse(d["grasp_type"]), d.get("mass_g"))
        meta = TrialMeta(
            subject_id=str(d["subject"]),
            object=obj,
            trial_index=int(d.get("trial_index", 1)),
            scan_rate_hz=float(d.get("scan_rate_hz", 40.0)),
            duration_s=float(d.get("duration_s", 30.0)),
            annotation=PhaseAnnotation(**ann) if ann else None,
            video=d.get("video"),
        )
        return cls(str(d["file"]), meta)


@dataclass(frozen=True)
class Manifest:
    entries: tuple[ManifestEntry, ...]
    version: int = FORMAT_VERSION

    @property
    def subjects(self) -> list[str]:
        return sorted({e.meta.subject_id for e in self.entries})

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "subjects": self.subjects,
            "trials": [e.to_json() for e in self.entries],
        }


def trial_filename(meta: TrialMeta) -> str:
    return f"{meta.subject_id}/{meta.object.slug}_{meta.trial_index}.csv"


def write_manifest(manifest: Manifest, directory) -> Path:
    path = Path(directory) / MANIFEST_NAME
    _atomic_write(path, dump_json(manifest.to_json()))
    return path


def _manifest_path(path) -> Path:
    path = Path(path)
    return path / MANIFEST_NAME if path.is_dir() else path


def read_manifest(path) -> Manifest:
    path = _manifest_path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read manifest: {exc.strerror}", path) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
    if not isinstance(doc, dict) or "trials" not in doc:
        raise ParseError("manifest needs a 'trials' list", path)
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported manifest version {version!r}", path)
    entries = []
    for i, item in enumerate(doc["trials"]):
        try:
            entries.append(ManifestEntry.from_json(item))
        except (KeyError, TypeError, ValueError, GraspError) as exc:
            raise ParseError(f"trial entry {i}: {exc!r}", path) from None
    return Manifest(tuple(entries), version)


def load_dataset(path, f_on: float = 0.1, validate: bool = True) -> Dataset:
    """Load every trial named by a manifest (file or its directory).

    All problems (missing or malformed files, duplicate keys, failed
    validation) are collected and raised together as one
    :class:`DatasetError`.
    """
    mpath = _manifest_path(path)
    manifest = read_manifest(mpath)
    root = mpath.parent
    problems, trials, seen = [], [], {}
    for entry in manifest.entries:
        key = entry.meta.key
        label = f"{entry.meta.subject_id}/{entry.meta.object.slug}/{entry.meta.trial_index}"
        if key in seen:
            problems.append(f"{label}: duplicate trial key (also {seen[key]})")
            continue
        seen[key] = entry.file
        fpath = root / entry.file
        if not fpath.is_file():
            problems.append(f"{label}: missing file {fpath}")
            continue
        try:
            trial = read_trial_csv(fpath, entry.meta)
        except GraspError as exc:
            problems.append(f"{label}: {exc}")
            continue
        if validate:
            report = validate_trial(trial, f_on)
            if not report.passed:
                problems.append(f"{label}: {report.summary()}")
                continue
        trials.append(trial)
    if problems:
        raise DatasetError(problems)
    return Dataset(trials)


# -- synthetic datasets -------------------------------------------------------


def _config_record(cfg: SyntheticConfig) -> dict:
    return {
        "seed": cfg.seed,
        "rank": cfg.rank,
        "n_subjects": cfg.n_subjects,
        "trials_per_object": cfg.trials_per_object,
        "timings": {
            "approach": cfg.approach_sample,
            "contact": cfg.contact_sample,
            "lift": cfg.lift_sample,
            "hold": cfg.hold_sample,
            "jitter": cfg.timing_jitter,
        },
        "snr_db": cfg.snr_db,
        "hold_noise": {"posture": cfg.hold_noise("posture"), "force": cfg.hold_noise("force")},
        "sample_noise": {"posture": cfg.angle_noise, "force": cfg.force_noise},
        "base": list(cfg.base),
        "basis": [list(r) for r in cfg.basis],
        "type_coefficients": {
            gt.value: list(z) for gt, z in sorted(cfg.type_coefficients.items(), key=lambda kv: kv[0].order)
        },
        "force_gain": {gt.value: g for gt, g in sorted(cfg.force_gain.items(), key=lambda kv: kv[0].order)},
        "correlation_targets": [
            {
                "domain": t.domain,
                "finger_a": t.finger_a.label,
                "finger_b": t.finger_b.label,
                "rho": t.rho,
                "grasp_type": t.grasp_type.value if t.grasp_type else None,
            }
            for t in cfg.correlation_targets
        ],
    }


def generate_synthetic_dataset(cfg: SyntheticConfig, directory) -> Path:
    """Write the full (subject x object x trial) grid, the ground truth and, last, the manifest."""
    root = Path(directory)
    try:
        root.mkdir(parents=True, exist_ok=True)
        if not os.access(root, os.W_OK):
            raise PermissionError(13, "directory not writable")
    except OSError as exc:
        raise DatasetError([f"cannot write to {root}: {exc.strerror or exc}"]) from None
    entries, truth = [], {}
    for subject, obj, k in iter_grid(cfg):
        trial, gt = generate_synthetic_trial(cfg, subject, obj, k)
        name = trial_filename(trial.meta)
        write_trial_csv(trial, root / name)
        entries.append(ManifestEntry(name, trial.meta))
        truth[trial.label] = gt.as_dict()
    _atomic_write(
        root / GROUND_TRUTH_NAME,
        dump_json({"version": FORMAT_VERSION, "config": _config_record(cfg), "trials": truth}),
    )
    return write_manifest(Manifest(tuple(entries)), root)


def read_ground_truth(path) -> dict[str, GroundTruth]:
    """Planted truth per trial label (``subject/slug/trial``)."""
    path = Path(path)
    if path.is_dir():
        path = path / GROUND_TRUTH_NAME
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read ground truth: {exc}", path) from None
    if doc.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported ground-truth version {doc.get('version')!r}", path)
    return {label: GroundTruth.from_dict(d) for label, d in doc["trials"].items()}


# -- calibration files --------------------------------------------------------


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def calibration_text(cal: HandCalibration) -> str:
    lines = [
        "[glove]",
        f"version = {FORMAT_VERSION}",
        "",
        "[divider]",
        f"v_cc = {_num(cal.divider.v_cc)}",
        f"r_pulldown = {_num(cal.divider.r_pulldown)}",
    ]
    for finger, flex, force in zip(FINGERS, cal.flex, cal.force):
        lines += ["", f"[{finger.label.lower()}]"]
        lines.append(f"flex_r_flat = {_num(flex.r_flat)}")
        lines.append(f"flex_r_full = {_num(flex.r_full)}")
        if force is not None:
            lines.append("force_capacitance = " + ", ".join(_num(c) for c in force.capacitance))
            lines.append("force_newton = " + ", ".join(_num(f) for f in force.force))
    return "\n".join(lines) + "\n"


def write_calibration(cal: HandCalibration, path) -> Path:
    path = Path(path)
    _atomic_write(path, calibration_text(cal))
    return path


def read_calibration(path) -> HandCalibration:
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ParseError(f"cannot read calibration: {exc.strerror}", path) from None
    except configparser.Error as exc:
        raise ParseError(f"malformed calibration file: {exc}", path) from None
    try:
        version = parser.getint("glove", "version")
        if version != FORMAT_VERSION:
            raise ParseError(f"unsupported calibration version {version}", path)
        divider = VoltageDividerConfig(
            parser.getfloat("divider", "v_cc"), parser.getfloat("divider", "r_pulldown")
        )
        flex, force = [], []
        for finger in FINGERS:
            sec = parser[finger.label.lower()]
            flex.append(FlexCalibration(float(sec["flex_r_flat"]), float(sec["flex_r_full"])))
            if "force_capacitance" in sec:
                force.append(
                    ForceCalibration(_floats(sec["force_capacitance"]), _floats(sec["force_newton"]))
                )
            else:
                force.append(None)
    except (KeyError, ValueError, configparser.Error, GraspError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad calibration entry: {exc}", path) from None
    return HandCalibration(divider, tuple(flex), tuple(force))
