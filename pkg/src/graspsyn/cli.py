"""Command-line front end.

Each subcommand writes primary records (CSV/JSON) plus SVG figures into
``--out`` together with ``run.json`` describing the invocation.  Outputs are
assembled in memory and written only once the whole computation succeeded, so
a failed run never clobbers earlier results; it writes ``error.json`` instead
and prints the same record on stderr.

Exit codes: 0 success, 1 analysis failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import Dataset, extract_features, feature_matrix
from .errors import DatasetError, GraspError
from .hand import FINGERS, GraspType, posture_labels
from .io import _atomic_write, _num, dump_json, generate_synthetic_dataset, load_dataset
from .phases import SegmentationConfig, validate_trial
from .svg import line_svg, radar_svg, scatter_svg
from .synergy.correlation import FINGER_PAIRS, correlation_extrema, grasp_type_correlations
from .synergy.forcemass import force_mass_fit
from .synergy.pca import elbow_select, pca_fit, pca_project
from .synergy.radar import radar_area, radar_profiles
from .synergy.tsne import tsne_embed
from .synthetic import SyntheticConfig

log = logging.getLogger("graspsyn")

__all__ = ["main", "dispatch", "build_parser"]

COMMANDS = ("simulate", "validate", "segment", "features", "correlate", "radar", "forcemass", "pca", "tsne", "report")
STOCHASTIC = ("simulate", "tsne", "report")
ANALYSES = ("segment", "features", "correlate", "radar", "forcemass", "pca", "tsne")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graspsyn", description="Grasp synergy analysis toolkit.")
    parser.add_argument("--version", action="version", version=f"graspsyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "simulate": "write a seeded synthetic dataset",
        "validate": "per-trial integrity checks",
        "segment": "phase boundaries per trial",
        "features": "hold-phase feature table",
        "correlate": "finger-pair correlation matrices per grasp type and their extrema",
        "radar": "radar profiles, pentagon areas and figures",
        "forcemass": "hold force against object mass",
        "pca": "principal components, explained variance, elbow and scores",
        "tsne": "2-D t-SNE embedding coloured by grasp type",
        "report": "every analysis into one directory",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--out", required=True, type=Path, help="output directory (created if absent)")
        p.add_argument("--seed", type=int, help="random seed (required for simulate, tsne, report)")
        if name == "simulate":
            p.add_argument("--trials", type=int, default=1, help="trials per subject and object")
            p.add_argument("--subjects", type=int, default=10, help="number of subjects")
            continue
        p.add_argument("--dataset", required=True, type=Path, help="dataset directory or manifest file")
        p.add_argument("--f-on", type=float, default=0.1, help="contact threshold [N]")
        if name != "validate":
            p.add_argument("--hold-std", type=float, default=0.05, help="hold steadiness threshold [N]")
        if name in ("correlate", "pca", "tsne", "report"):
            p.add_argument("--domain", choices=("force", "posture"), help="restrict to one domain")
        if name in ("pca", "tsne", "report"):
            p.add_argument("--decomposed", action="store_true", help="use 15 joint angles for posture")
            p.add_argument("--zscore", action="store_true", help="standardise features first")
        if name in ("tsne", "report"):
            p.add_argument("--perplexity", type=float, default=30.0)
            p.add_argument("--iterations", type=int, default=1000)
    return parser


# -- record helpers -----------------------------------------------------------


def _csv(header, rows) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, (bool, np.bool_)):
            return "true" if v else "false"
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        if isinstance(v, (float, np.floating)):
            return "nan" if np.isnan(v) else _num(v)
        text = str(v)
        return f'"{text}"' if ("," in text or '"' in text) else text

    lines = [",".join(header)] + [",".join(cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        return None if not np.isfinite(x) else float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, GraspType):
        return x.value
    return x


def _json(obj) -> str:
    return dump_json(_jsonable(obj))


def _meta_cols(trial):
    m = trial.meta
    return [trial.label, m.subject_id, m.grasp_type.value, m.object.name, m.trial_index]


_META_HEADER = ["trial", "subject", "grasp_type", "object", "trial_index"]


# -- analyses -----------------------------------------------------------------


class Context:
    """Lazily loaded dataset and features shared by the analyses of one run."""

    def __init__(self, args):
        self.args = args
        self.seg = SegmentationConfig(f_on=args.f_on, hold_std=getattr(args, "hold_std", 0.05))
        self._raw = None
        self._dataset = None
        self._records = None

    @property
    def raw_dataset(self) -> Dataset:
        """Every parseable trial, before the integrity checks."""
        if self._raw is None:
            self._raw = load_dataset(self.args.dataset, f_on=self.args.f_on, validate=False)
        return self._raw

    @property
    def dataset(self) -> Dataset:
        if self._dataset is None:
            failed = []
            for trial in self.raw_dataset:
                rep = validate_trial(trial, self.args.f_on)
                if not rep.passed:
                    failed.append(f"{trial.label}: {rep.summary()}")
            if failed:
                raise DatasetError(failed)
            self._dataset = self.raw_dataset
        return self._dataset

    @property
    def records(self):
        if self._records is None:
            self._records = extract_features(self.dataset, self.seg, strict=True)
        return self._records

    def domains(self):
        d = getattr(self.args, "domain", None)
        return (d,) if d else ("posture", "force")

    def matrix(self, domain):
        decomposed = getattr(self.args, "decomposed", False)
        X = feature_matrix(self.records, domain, decomposed=decomposed and domain == "posture")
        if domain == "force":
            labels = [f"f_{f.label.lower()}" for f in FINGERS]
        elif decomposed:
            labels = posture_labels()
        else:
            labels = [f"a_{f.label.lower()}" for f in FINGERS]
        return X, labels


def do_validate(ctx: Context, out: dict) -> list[str]:
    rows, failed = [], []
    for trial in ctx.raw_dataset:
        rep = validate_trial(trial, ctx.args.f_on)
        rows.append(_meta_cols(trial) + [rep.passed, rep.no_contact, "; ".join(rep.violations)])
        if not rep.passed:
            failed.append(f"{trial.label}: {rep.summary()}")
    out["validation.csv"] = _csv(_META_HEADER + ["passed", "no_contact", "violations"], rows)
    return failed


def do_segment(ctx: Context, out: dict):
    rows = []
    for rec in ctx.records:
        manual = rec.trial.meta.annotation is not None
        rows.append(_meta_cols(rec.trial) + list(rec.phases.as_tuple()) + ["manual" if manual else "detected"])
    header = _META_HEADER + ["approach_start", "grasp_start", "lift_start", "hold_start", "hold_end", "source"]
    out["phases.csv"] = _csv(header, rows)


def do_features(ctx: Context, out: dict):
    header = (
        _META_HEADER
        + [f"f_{f.label.lower()}" for f in FINGERS]
        + [f"a_{f.label.lower()}" for f in FINGERS]
        + ["total_force"]
    )
    rows = [
        _meta_cols(r.trial) + list(r.features.mean_forces) + list(r.features.mean_angles) + [r.features.total_force]
        for r in ctx.records
    ]
    out["features.csv"] = _csv(header, rows)


def do_correlate(ctx: Context, out: dict):
    matrices = {}
    doc = {"window": "full", "domains": {}}
    for domain in ctx.domains():
        per_type = grasp_type_correlations(ctx.dataset, domain)
        matrices[domain] = per_type
        doc["domains"][domain] = {
            gt.value: {"labels": list(m.labels), "r": m.r, "undefined": [[a.label, b.label] for a, b in m.undefined]}
            for gt, m in per_type.items()
        }
    out["correlation.json"] = _json(doc)
    ext = correlation_extrema(matrices)
    rows = []
    for domain in ctx.domains():
        for a, b in FINGER_PAIRS:
            try:
                e = ext[(domain, (a, b))]
            except KeyError:
                rows.append([domain, f"{a.label}-{b.label}", None, None, None, None])
                continue
            rows.append([domain, f"{a.label}-{b.label}", e.max_r, e.max_type.value, e.min_r, e.min_type.value])
    out["correlation_extrema.csv"] = _csv(["domain", "pair", "max_r", "max_type", "min_r", "min_type"], rows)


def do_radar(ctx: Context, out: dict):
    profiles = radar_profiles(ctx.records)
    doc = {}
    for gt, prof in profiles["force"].items():
        post = profiles["posture"][gt]
        flex = [r.features.mean_angles for r in ctx.records if r.grasp_type is gt]
        doc[gt.value] = {
            "n_trials": prof.n_trials,
            "force": dict(prof.spokes),
            "posture": dict(post.spokes),
            "force_area": radar_area(prof),
            "flex_area": radar_area(np.mean(flex, axis=0)),
        }
    power = [doc[g.value]["force_area"] for g in profiles["force"] if g.is_power]
    precision = [doc[g.value]["force_area"] for g in profiles["force"] if g.is_precision]
    summary = {
        "mean_power_force_area": float(np.mean(power)) if power else None,
        "mean_precision_force_area": float(np.mean(precision)) if precision else None,
    }
    out["radar.json"] = _json({"types": doc, "summary": summary})
    out["radar_force.svg"] = radar_svg(
        {g.value: p.radii for g, p in profiles["force"].items()},
        [f.label for f in FINGERS],
        "Mean hold force per finger [N]",
    )
    out["radar_posture.svg"] = radar_svg(
        {g.value: p.radii for g, p in profiles["posture"].items()},
        posture_labels(),
        "Mean hold joint angles [deg]",
    )


def do_forcemass(ctx: Context, out: dict):
    rows, series, skipped = [], {}, []
    for gt in sorted({r.grasp_type for r in ctx.records}, key=lambda g: g.order):
        try:
            model = force_mass_fit(ctx.records, gt)
        except GraspError as exc:
            skipped.append({"grasp_type": gt.value, "reason": str(exc)})
            continue
        for name, m, f, per in zip(model.objects, model.masses, model.forces, model.finger_forces):
            rows.append([gt.value, name, m, f] + list(per))
        series[gt.value] = (model.masses, model.forces)
    header = ["grasp_type", "object", "mass_g", "total_force"] + [f"f_{f.label.lower()}" for f in FINGERS]
    out["forcemass.csv"] = _csv(header, rows)
    out["forcemass.json"] = _json({"skipped": skipped})
    if series:
        out["forcemass.svg"] = _forcemass_svg(series)


def _forcemass_svg(series) -> str:
    # shared x grid: the union of all masses, each type blank outside its own range
    grid = np.unique(np.concatenate([m for m, _ in series.values()]))
    lines = {}
    for name, (m, f) in series.items():
        inside = (grid >= m[0]) & (grid <= m[-1])
        lines[name] = np.where(inside, np.interp(grid, m, f), np.nan)
    return line_svg(grid, lines, "Hold force against object mass", "object mass [g]", "total hold force [N]")


def do_pca(ctx: Context, out: dict):
    for domain in ctx.domains():
        X, labels = ctx.matrix(domain)
        model = pca_fit(X, standardize=ctx.args.zscore)
        k = elbow_select(model.explained)
        doc = {
            "domain": domain,
            "standardized": bool(ctx.args.zscore),
            "n_trials": X.shape[0],
            "features": labels,
            "mean": model.mean,
            "scale": model.scale,
            "eigenvalues": model.eigenvalues,
            "explained": model.explained,
            "cumulative": model.cumulative,
            "elbow_k": k,
            "components": model.components,
        }
        out[f"pca_{domain}.json"] = _json(doc)
        scores = pca_project(model, X)
        header = _META_HEADER + [f"pc{i + 1}" for i in range(scores.shape[1])]
        rows = [_meta_cols(r.trial) + list(s) for r, s in zip(ctx.records, scores)]
        out[f"pca_{domain}_scores.csv"] = _csv(header, rows)
        idx = np.arange(1, model.explained.size + 1)
        out[f"pca_{domain}_scree.svg"] = line_svg(
            idx,
            {"cumulative": model.cumulative},
            f"Explained variance ({domain})",
            "principal component",
            "fraction of variance",
            bars=model.explained,
            marker=k,
        )


def do_tsne(ctx: Context, out: dict):
    for domain in ctx.domains():
        X, _ = ctx.matrix(domain)
        if ctx.args.zscore:
            sd = X.std(axis=0, ddof=1)
            X = (X - X.mean(axis=0)) / np.where(sd > 0, sd, 1.0)
        emb = tsne_embed(X, perplexity=ctx.args.perplexity, seed=ctx.args.seed, iterations=ctx.args.iterations)
        rows = [_meta_cols(r.trial) + list(p) for r, p in zip(ctx.records, emb.points)]
        out[f"tsne_{domain}.csv"] = _csv(_META_HEADER + ["x", "y"], rows)
        out[f"tsne_{domain}.json"] = _json(
            {
                "domain": domain,
                "seed": emb.seed,
                "perplexity_requested": ctx.args.perplexity,
                "perplexity_used": emb.perplexity,
                "learning_rate": emb.learning_rate,
                "iterations": ctx.args.iterations,
                "final_kl": emb.final_kl,
            }
        )
        out[f"tsne_{domain}.svg"] = scatter_svg(
            emb.points, [r.grasp_type.value for r in ctx.records], f"t-SNE of hold {domain}"
        )


HANDLERS = {
    "segment": do_segment,
    "features": do_features,
    "correlate": do_correlate,
    "radar": do_radar,
    "forcemass": do_forcemass,
    "pca": do_pca,
    "tsne": do_tsne,
}


# -- dispatch -----------------------------------------------------------------


def _run_record(args) -> dict:
    flags = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())}
    return {"tool": "graspsyn", "version": __version__, "command": args.command, "seed": args.seed, "flags": flags}


def _commit(out_dir: Path, files: dict[str, str]) -> None:
    for name in sorted(files):
        _atomic_write(out_dir / name, files[name])
    stale = out_dir / "error.json"
    if stale.exists():
        stale.unlink()


def _fail(args, out_dir: Path | None, exc: Exception) -> int:
    problems = list(getattr(exc, "problems", []) or [str(exc)])
    record = {
        "status": "error",
        "command": args.command,
        "error": type(exc).__name__,
        "message": str(exc).splitlines()[0],
        "problems": problems,
        "trials": sorted({p.split(":", 1)[0] for p in problems if "/" in p.split(":", 1)[0]}),
    }
    text = json.dumps(record, sort_keys=True)
    print(text, file=sys.stderr)
    if out_dir is not None:
        try:
            _atomic_write(out_dir / "error.json", text + "\n")
        except OSError:
            pass
    return 1


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command in STOCHASTIC and args.seed is None:
        parser.print_usage(sys.stderr)
        print(f"graspsyn {args.command}: error: --seed is required", file=sys.stderr)
        return 2
    out_dir = args.out
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"graspsyn: cannot create output directory {out_dir}: {exc.strerror}", file=sys.stderr)
        return 1
    try:
        files = {}
        if args.command == "simulate":
            cfg = SyntheticConfig(seed=args.seed, n_subjects=args.subjects, trials_per_object=args.trials)
            generate_synthetic_dataset(cfg, out_dir)
        elif args.command == "validate":
            failed = do_validate(Context(args), files)
            if failed:
                _commit(out_dir, files | {"run.json": _json(_run_record(args))})
                return _fail(args, out_dir, DatasetError(failed))
        else:
            ctx = Context(args)
            names = ANALYSES if args.command == "report" else (args.command,)
            if args.command == "report":
                failed = do_validate(ctx, files)
                if failed:
                    return _fail(args, out_dir, DatasetError(failed))
            for name in names:
                HANDLERS[name](ctx, files)
        files["run.json"] = _json(_run_record(args))
        _commit(out_dir, files)
    except (GraspError, ValueError) as exc:
        return _fail(args, out_dir, exc)
    return 0


def main(argv=None) -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
