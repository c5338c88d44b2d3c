"""Evaluation harness: run every extraction method over a dataset of
trajectory/ECG pairs, compare against ECG ground truth, and emit
report/rmse/timing CSVs.

Dataset layout:

    <dir>/<subject>/<condition>/trajectories.csv   (trajectory CSV, origin=raw)
    <dir>/<subject>/<condition>/ecg.txt            (one amplitude per line)

Per-subject failures are recorded as rows and never abort the run. The
extraction stage is timed in isolation (median of three sequential runs,
wall clock), excluding ingestion, preprocessing and report emission;
timings are summed over conditions per subject.
"""

from __future__ import annotations

import os
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import pulse
from .config import PipelineConfig
from .ecg import ecg_ground_truth_bpm, read_ecg
from .errors import DataError, PulseMotionError
from .published import PUBLISHED_RMSE_NOTE
from .trajectories import read_trajectories

DEFAULT_METHODS = ("fastica", "pca", "jade", "shibbs")
TIMING_RUNS = 3


def rmse(estimates, ground_truth) -> float:
    """Root mean squared difference of two equal-length vectors."""
    est = np.asarray(estimates, np.float64)
    gt = np.asarray(ground_truth, np.float64)
    if est.shape != gt.shape or est.ndim != 1 or est.size == 0:
        raise DataError(f"rmse needs two equal-length non-empty vectors, "
                        f"got {est.shape} and {gt.shape}")
    return float(np.sqrt(np.mean((est - gt) ** 2)))


@dataclass
class SubjectRow:
    subject: str
    condition: str
    method: str
    bpm: float | None = None
    gt_bpm: float | None = None
    estimate: pulse.PulseEstimate | None = None
    failure: str | None = None

    @property
    def error(self) -> float | None:
        if self.bpm is None or self.gt_bpm is None:
            return None
        return self.bpm - self.gt_bpm


@dataclass
class EvaluationReport:
    rows: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)   # (method, subject) -> seconds
    n_components: int = 5

    def rmse_table(self) -> dict:
        """(method, condition) -> standard RMSE over successful rows."""
        table = {}
        for key, (est, gt) in self._pairs().items():
            table[key] = rmse(est, gt) if est else float("nan")
        return table

    def _pairs(self) -> dict:
        pairs: dict = {}
        for row in self.rows:
            pairs.setdefault((row.method, row.condition), ([], []))
            if row.bpm is not None and row.gt_bpm is not None:
                est, gt = pairs[(row.method, row.condition)]
                est.append(row.bpm)
                gt.append(row.gt_bpm)
        return pairs

    def n_successes(self) -> int:
        return sum(1 for row in self.rows if row.failure is None)


def discover_dataset(dataset_dir) -> list:
    """Sorted (subject, condition, trajectory_path, ecg_path) tuples."""
    root = Path(dataset_dir)
    if not root.is_dir():
        raise DataError(f"dataset directory {root} does not exist")
    entries = []
    for subject_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for cond_dir in sorted(p for p in subject_dir.iterdir() if p.is_dir()):
            traj = cond_dir / "trajectories.csv"
            ecg = cond_dir / "ecg.txt"
            if traj.is_file():
                entries.append((subject_dir.name, cond_dir.name, traj, ecg))
    if not entries:
        raise DataError(f"no <subject>/<condition>/trajectories.csv found "
                        f"under {root}")
    return entries


def run_benchmark(dataset_dir, methods=DEFAULT_METHODS,
                  cfg: PipelineConfig | None = None,
                  timing_runs: int = TIMING_RUNS) -> EvaluationReport:
    """Evaluate every method per subject and condition."""
    cfg = cfg or PipelineConfig()
    report = EvaluationReport(n_components=cfg.n_components)
    for subject, condition, traj_path, ecg_path in discover_dataset(dataset_dir):
        gt_bpm = None
        gt_failure = None
        try:
            gt_bpm = ecg_ground_truth_bpm(read_ecg(ecg_path))
        except (OSError, PulseMotionError) as exc:
            gt_failure = f"ground truth: {exc}"
        filtered = None
        load_failure = None
        try:
            traj = read_trajectories(traj_path)
            filtered = pulse.run_preprocess(traj, cfg)
        except (OSError, PulseMotionError) as exc:
            load_failure = str(exc)
        for method in methods:
            row = SubjectRow(subject=subject, condition=condition,
                             method=method, gt_bpm=gt_bpm)
            if load_failure is not None:
                row.failure = load_failure
            else:
                try:
                    elapsed = []
                    for _ in range(timing_runs):
                        t0 = time.perf_counter()
                        components = pulse.run_extraction(filtered, method, cfg)
                        elapsed.append(time.perf_counter() - t0)
                    key = (method, subject)
                    report.timing[key] = report.timing.get(key, 0.0) \
                        + statistics.median(elapsed)
                    est, _ = pulse.run_selection(components, cfg)
                    row.bpm = est.bpm
                    row.estimate = est
                except PulseMotionError as exc:
                    row.failure = str(exc)
            if row.failure is None and gt_failure is not None:
                row.failure = gt_failure
            report.rows.append(row)
    return report


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def report_header(n_components: int) -> str:
    skews = ",".join(f"skew_c{i}" for i in range(n_components))
    bads = ",".join(f"bad_c{i}" for i in range(n_components))
    return (f"subject,condition,method,bpm,selected_component,n_peaks,t1,t2,"
            f"{skews},{bads},gt_bpm,error,failure")


def write_report(report: EvaluationReport, out_dir) -> None:
    """Emit report.csv, rmse.csv and timing.csv atomically."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    k = report.n_components
    lines = [report_header(k)]
    for row in report.rows:
        est = row.estimate
        if est is not None:
            mid = (f"{_fmt(row.bpm)},{est.selected_component},"
                   f"{est.peaks.n_peaks},{_fmt(est.t1)},{_fmt(est.t2)},"
                   + ",".join(_fmt(s) for s in est.per_component_skewness)
                   + "," + ",".join(str(int(b)) for b in est.bad_flags))
        else:
            mid = ",".join([""] * (5 + 2 * k))
        failure = (row.failure or "").replace(",", ";").replace("\n", " ")
        lines.append(f"{row.subject},{row.condition},{row.method},{mid},"
                     f"{_fmt(row.gt_bpm)},{_fmt(row.error)},{failure}")
    _atomic_write(out / "report.csv", "\n".join(lines) + "\n")

    rmse_lines = [f"# {PUBLISHED_RMSE_NOTE}", "method,condition,rmse"]
    for (method, condition), value in sorted(report.rmse_table().items()):
        rmse_lines.append(f"{method},{condition},{_fmt(value)}")
    _atomic_write(out / "rmse.csv", "\n".join(rmse_lines) + "\n")

    timing_lines = ["method,subject,seconds"]
    for (method, subject), seconds in sorted(report.timing.items()):
        timing_lines.append(f"{method},{subject},{_fmt(seconds)}")
    _atomic_write(out / "timing.csv", "\n".join(timing_lines) + "\n")


def load_report(out_dir) -> list:
    """Parse report.csv back and verify rmse.csv is recomputable from it.

    Returns the parsed rows as dicts; raises DataError if the stored
    aggregates disagree with the rows (self-consistency check).
    """
    out = Path(out_dir)
    with open(out / "report.csv", "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise DataError(f"report.csv row has {len(parts)} fields, "
                            f"expected {len(header)}")
        rows.append(dict(zip(header, parts)))
    recomputed: dict = {}
    for row in rows:
        if row["bpm"] and row["gt_bpm"]:
            key = (row["method"], row["condition"])
            est, gt = recomputed.setdefault(key, ([], []))
            est.append(float(row["bpm"]))
            gt.append(float(row["gt_bpm"]))
    with open(out / "rmse.csv", "r", encoding="utf-8") as fh:
        stored_lines = [ln for ln in fh.read().splitlines()
                        if ln and not ln.startswith("#")]
    for line in stored_lines[1:]:
        method, condition, value = line.split(",")
        if not value or value == "nan":
            continue
        est, gt = recomputed.get((method, condition), ([], []))
        if not est:
            raise DataError(f"rmse.csv has ({method},{condition}) but "
                            f"report.csv has no successful rows for it")
        got = rmse(est, gt)
        if abs(got - float(value)) > 1e-9:
            raise DataError(
                f"rmse.csv value {value} for ({method},{condition}) is not "
                f"recomputable from report.csv rows (got {got})")
    return rows
