"""Command-line interface.

Subcommands: ``estimate`` (trajectories -> bpm), ``evaluate`` (dataset ->
report/rmse/timing CSVs), ``plot`` (artifact -> SVG + CSV), ``track-ingest``
(validate a trajectory CSV produced by the tracker frontend).

Exit codes: 0 success, 1 usage, 2 data error, 3 estimation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import evaluate as evaluate_mod
from . import plotting, pulse
from .bss import METHODS, write_components
from .config import PipelineConfig, dump_config, from_dict, load_config
from .errors import ConfigError, DataError, EstimationError, PulseMotionError
from .trajectories import read_trajectories


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pulsemotion",
                     description="pulse-rate estimation from facial "
                                 "feature-point motion")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate bpm from a trajectory CSV")
    est.add_argument("trajectories", help="trajectory CSV (origin=raw)")
    est.add_argument("--method", default="jade", choices=METHODS)
    est.add_argument("--config", help="JSON config file")
    est.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override a config key (repeatable)")
    est.add_argument("--out", help="write the estimate CSV here")
    est.add_argument("--subject", help="subject label for the CSV "
                                       "(default: file stem)")
    est.add_argument("--artifacts-dir",
                     help="also dump components, match curves and the "
                          "selected component for plotting")

    ev = sub.add_parser("evaluate", help="run the evaluation harness "
                                         "over a dataset directory")
    ev.add_argument("dataset", help="dataset root "
                                    "(<subject>/<condition>/trajectories.csv)")
    ev.add_argument("--out-dir", required=True)
    ev.add_argument("--config", help="JSON config file")
    ev.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    ev.add_argument("--methods", default=",".join(evaluate_mod.DEFAULT_METHODS),
                    help="comma-separated subset of methods")

    pl = sub.add_parser("plot", help="render an artifact CSV as SVG + CSV")
    pl.add_argument("artifact")
    pl.add_argument("--kind", required=True, choices=plotting.KINDS)
    pl.add_argument("--out", required=True, help="output SVG path")

    ti = sub.add_parser("track-ingest",
                        help="validate a trajectory CSV from the tracker")
    ti.add_argument("trajectories")
    return parser


def _merged_config(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            overrides[key] = json.loads(raw)
        except json.JSONDecodeError:
            overrides[key] = raw
    if overrides:
        cfg = from_dict({**cfg.to_dict(), **overrides})
    return cfg


def _cmd_estimate(args) -> int:
    cfg = _merged_config(args)
    traj = read_trajectories(args.trajectories)
    subject = args.subject or Path(args.trajectories).stem
    est, artifacts = pulse.estimate_pulse_with_artifacts(traj, args.method, cfg)
    print(f"bpm={est.bpm:.3f} component={est.selected_component} "
          f"peaks={est.peaks.n_peaks}")
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        pulse.write_estimate(est, subject, args.method, out)
        dump_config(cfg, out.parent / "effective_config.json")
    if args.artifacts_dir:
        art_dir = Path(args.artifacts_dir)
        art_dir.mkdir(parents=True, exist_ok=True)
        write_components(artifacts.components, art_dir / "components.csv")
        for i, (curve, peaks) in enumerate(zip(artifacts.curves,
                                               artifacts.peak_sets)):
            pulse.write_match_curve(curve, peaks,
                                    artifacts.components.sample_rate, i,
                                    art_dir / f"curve_c{i}.csv")
        pulse.write_selected_component(artifacts.components,
                                       artifacts.peak_sets[est.selected_component],
                                       est.selected_component,
                                       art_dir / "selected.csv")
        dump_config(cfg, art_dir / "effective_config.json")
    return 0


def _cmd_evaluate(args) -> int:
    cfg = _merged_config(args)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r} in --methods")
    report = evaluate_mod.run_benchmark(args.dataset, methods, cfg)
    out_dir = Path(args.out_dir)
    evaluate_mod.write_report(report, out_dir)
    dump_config(cfg, out_dir / "effective_config.json")
    n_rows = len(report.rows)
    print(f"wrote {out_dir}/report.csv ({n_rows} rows, "
          f"{report.n_successes()} successful)")
    for (method, condition), value in sorted(report.rmse_table().items()):
        print(f"rmse {method} {condition}: {value:.3f}")
    return 0


def _cmd_plot(args) -> int:
    plotting.render(args.artifact, args.kind, args.out)
    print(f"wrote {args.out} and {Path(args.out).with_suffix('.csv')}")
    return 0


def _cmd_track_ingest(args) -> int:
    traj = read_trajectories(args.trajectories)
    if traj.origin != "raw":
        raise DataError(f"{args.trajectories}: tracker output must have "
                        f"origin=raw, got {traj.origin!r}")
    print(f"ok: {traj.n_features} features x {traj.n_samples} frames "
          f"at {traj.sample_rate:g} fps "
          f"({traj.duration_seconds:.2f}s)")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "estimate":
            return _cmd_estimate(args)
        if args.command == "evaluate":
            return _cmd_evaluate(args)
        if args.command == "plot":
            return _cmd_plot(args)
        if args.command == "track-ingest":
            return _cmd_track_ingest(args)
        parser.error(f"unknown command {args.command!r}")
    except SystemExit:
        raise
    except EstimationError as exc:
        sys.stderr.write(f"estimation failed: {exc}\n")
        return 3
    except (ConfigError, DataError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except PulseMotionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
