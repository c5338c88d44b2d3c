"""Pulse-rate extraction from separated components.

Per component: build a motion-of-interest template by averaging fixed-time
windows of the component itself, slide it with moving DTW to get a match
curve, detect repeating matches as local cost minima, flag components whose
extremes breach +-3 sigma, pick the component whose inter-peak intervals
have the smallest third central moment, and turn its peak train into beats
per minute.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels, bss, preprocess, ssa
from .config import PipelineConfig
from .errors import DataError, EstimationError, PulseMotionError
from .trajectories import BandPassSpec, FeatureTrajectories


@dataclass(frozen=True)
class MotionPattern:
    """Short template built from the component itself."""

    samples: np.ndarray
    source_component: int
    anchor_seconds: tuple

    def __post_init__(self):
        arr = np.asarray(self.samples, np.float64)
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise DataError("pattern needs at least 2 samples")
        if not np.all(np.isfinite(arr)):
            raise DataError("pattern contains non-finite values")
        object.__setattr__(self, "samples", arr)

    @property
    def window_length(self) -> int:
        return int(self.samples.shape[0])


@dataclass(frozen=True)
class MatchCurve:
    """Sliding-window DTW costs: window start positions and distances."""

    positions: np.ndarray
    distances: np.ndarray
    step: int
    window_length: int

    def __post_init__(self):
        pos = np.asarray(self.positions, np.int64)
        dist = np.asarray(self.distances, np.float64)
        if pos.shape != dist.shape or pos.ndim != 1 or pos.size == 0:
            raise DataError("positions and distances must be equal-length "
                            "non-empty vectors")
        if pos.size > 1 and not np.all(np.diff(pos) == self.step):
            raise DataError("positions must increase by exactly the step")
        if np.any(dist < 0):
            raise DataError("DTW distances cannot be negative")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "distances", dist)


@dataclass(frozen=True)
class PeakSet:
    """Detected peak sample indices (into the component), ascending."""

    peak_indices: np.ndarray
    threshold_used: float

    def __post_init__(self):
        idx = np.asarray(self.peak_indices, np.int64)
        if idx.ndim != 1:
            raise DataError("peak indices must be a vector")
        if idx.size > 1 and not np.all(np.diff(idx) > 0):
            raise DataError("peak indices must be strictly increasing")
        object.__setattr__(self, "peak_indices", idx)

    @property
    def n_peaks(self) -> int:
        return int(self.peak_indices.size)


@dataclass(frozen=True)
class PulseEstimate:
    bpm: float
    t1: float
    t2: float
    n_p: int
    peaks: PeakSet
    selected_component: int = -1
    per_component_skewness: tuple = ()
    bad_flags: tuple = ()

    def __post_init__(self):
        if self.bpm <= 0:
            raise EstimationError(f"bpm must be positive, got {self.bpm}")
        if self.t2 <= self.t1:
            raise EstimationError(f"t2 must exceed t1 ({self.t1}, {self.t2})")
        if (self.bad_flags and 0 <= self.selected_component < len(self.bad_flags)
                and self.bad_flags[self.selected_component]):
            raise EstimationError("selected component is flagged bad")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def extract_pattern(component: np.ndarray, sample_rate: float,
                    anchors, window_seconds: float,
                    source_component: int = 0) -> MotionPattern:
    """Element-wise mean of equal-length windows starting at each anchor."""
    comp = np.asarray(component, np.float64)
    w = int(round(window_seconds * sample_rate))
    if w < 2:
        raise DataError(f"pattern window of {window_seconds}s at "
                        f"{sample_rate}Hz is shorter than 2 samples")
    windows = []
    for a in anchors:
        start = int(round(a * sample_rate))
        if start < 0 or start + w > comp.shape[0]:
            raise DataError(
                f"anchor at {a}s needs samples {start}..{start + w} but the "
                f"component has {comp.shape[0]}; supply earlier anchors")
        windows.append(comp[start:start + w])
    return MotionPattern(np.mean(windows, axis=0), source_component,
                         tuple(float(a) for a in anchors))


def is_bad_component(component: np.ndarray, mode: str = "intent",
                     tolerance: float = 0.0) -> bool:
    """Flag components whose extremes breach +-3 sigma.

    ``intent`` tests exceedance of +-(3 sigma + tolerance). ``literal``
    reproduces the published pseudo-code verbatim, including its integer
    truncation (which also fires when extremes are much smaller than
    3 sigma); kept behind this flag for comparison runs.
    """
    comp = np.asarray(component, np.float64)
    sigma = float(comp.std())
    lo = float(comp.min())
    hi = float(comp.max())
    if mode == "literal":
        return abs(int(lo + 3.0 * sigma)) > 0 or abs(int(hi - 3.0 * sigma)) > 0
    return hi > 3.0 * sigma + tolerance or lo < -(3.0 * sigma + tolerance)


def dtw_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Warping cost with Manhattan local metric, boundary-matched,
    moves {advance a, advance b, advance both}."""
    a = np.asarray(a, np.float64)
    b = np.asarray(b, np.float64)
    if a.size == 0 or b.size == 0:
        raise DataError("DTW inputs must be non-empty")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DataError("DTW inputs must be finite")
    return float(_kernels.dtw_pair(a, b))


def mdtw(component: np.ndarray, pattern: MotionPattern, step: int) -> MatchCurve:
    """Slide the pattern along the component by ``step``, recording the DTW
    cost of every full window until none fits."""
    comp = np.asarray(component, np.float64)
    w = pattern.window_length
    if step < 1:
        raise DataError(f"step must be >= 1, got {step}")
    if w > comp.shape[0]:
        raise DataError(f"pattern (length {w}) is longer than the component "
                        f"(length {comp.shape[0]})")
    n_windows = (comp.shape[0] - w) // step + 1
    distances = _kernels.mdtw_distances(pattern.samples, comp, step, n_windows)
    positions = np.arange(n_windows, dtype=np.int64) * step
    return MatchCurve(positions, distances, step, w)


def _extremum_runs(d: np.ndarray, minima: bool):
    """First index of every interior plateau that is a local extremum."""
    n = d.shape[0]
    out = []
    s = 0
    while s < n:
        e = s
        while e + 1 < n and d[e + 1] == d[s]:
            e += 1
        if 0 < s and e < n - 1:
            if minima:
                if d[s - 1] > d[s] and d[e + 1] > d[s]:
                    out.append(s)
            else:
                if d[s - 1] < d[s] and d[e + 1] < d[s]:
                    out.append(s)
        s = e + 1
    return out


def detect_peaks(curve: MatchCurve, threshold: float, min_separation: int,
                 polarity: str = "minima") -> PeakSet:
    """Local extrema of the match curve passing the threshold, mapped to
    window centers, at least ``min_separation`` component samples apart.

    Minima polarity (the default) marks template matches: low DTW cost means
    the heartbeat-shaped window recurred. Ties inside a separation window
    keep the more extreme value, then the earlier one.
    """
    if polarity not in ("minima", "maxima"):
        raise DataError(f"polarity must be 'minima' or 'maxima', got {polarity!r}")
    minima = polarity == "minima"
    d = curve.distances
    candidates = _extremum_runs(d, minima)
    passing = [i for i in candidates
               if (d[i] <= threshold if minima else d[i] >= threshold)]
    # greedy by extremeness, then earliness
    passing.sort(key=lambda i: (d[i] if minima else -d[i], curve.positions[i]))
    centers = curve.positions + curve.window_length // 2
    accepted: list[int] = []
    for i in passing:
        pos = int(centers[i])
        if all(abs(pos - p) >= min_separation for p in accepted):
            accepted.append(pos)
    accepted.sort()
    return PeakSet(np.asarray(accepted, np.int64), float(threshold))


def skewness(diff_vector: np.ndarray) -> float:
    """Third central moment (1/m) sum (d_i - mean)^3 of the inter-peak
    interval vector."""
    d = np.asarray(diff_vector, np.float64)
    if d.size < 1:
        raise DataError("diff vector must have at least one element")
    dev = d - d.mean()
    return float(np.mean(dev ** 3))


def select_optimal_component(components: bss.ComponentSet,
                             peak_sets: list[PeakSet],
                             bad_flags: list[bool],
                             mode: str = "absolute"):
    """Among non-bad components with at least 3 peaks, pick the one whose
    inter-peak intervals (seconds) have minimal skewness magnitude
    (or minimal signed skewness in ``literal``-style mode); ties go to the
    lower component index.

    Returns ``(index, diagnostics)`` with per-component skewness and
    eligibility recorded.
    """
    sr = components.sample_rate
    skews = []
    eligible = []
    for i, ps in enumerate(peak_sets):
        if ps.n_peaks >= 2:
            skews.append(skewness(np.diff(ps.peak_indices) / sr))
        else:
            skews.append(float("nan"))
        eligible.append(not bad_flags[i] and ps.n_peaks >= 3)
    best = None
    best_val = None
    for i, ok in enumerate(eligible):
        if not ok:
            continue
        val = abs(skews[i]) if mode == "absolute" else skews[i]
        if best is None or val < best_val:
            best, best_val = i, val
    if best is None:
        raise EstimationError(
            "no component is eligible for selection (all flagged bad or "
            "fewer than 3 peaks detected)")
    diagnostics = {
        "skewness": skews,
        "bad_flags": list(bad_flags),
        "n_peaks": [ps.n_peaks for ps in peak_sets],
        "eligible": eligible,
    }
    return best, diagnostics


def pulse_rate(peaks: PeakSet, sample_rate: float,
               mode: str = "intervals") -> PulseEstimate:
    """Beat rate over the spanned interval: 60/(t2-t1) * N_p.

    ``intervals`` counts inter-beat intervals (peaks - 1), which makes a
    1 Hz peak train read exactly 60 bpm; ``literal`` counts the peaks
    themselves.
    """
    if peaks.n_peaks < 2:
        raise EstimationError(
            f"need at least 2 peaks for a rate, got {peaks.n_peaks}")
    t1 = float(peaks.peak_indices[0]) / sample_rate
    t2 = float(peaks.peak_indices[-1]) / sample_rate
    n_p = peaks.n_peaks - 1 if mode == "intervals" else peaks.n_peaks
    return PulseEstimate(bpm=60.0 / (t2 - t1) * n_p, t1=t1, t2=t2,
                         n_p=n_p, peaks=peaks)


# ---------------------------------------------------------------------------
# composed pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PipelineArtifacts:
    """Intermediate products kept for plotting and reports."""

    components: bss.ComponentSet
    patterns: list
    curves: list
    peak_sets: list
    ssa_leading_energy: tuple = ()


@contextmanager
def _stage(name: str):
    try:
        yield
    except PulseMotionError as exc:
        raise exc.with_stage(name)


def run_preprocess(traj: FeatureTrajectories,
                   cfg: PipelineConfig) -> FeatureTrajectories:
    with _stage("resample"):
        traj = preprocess.cubic_spline_resample(traj, cfg.interpolation_factor)
    with _stage("stability"):
        traj = preprocess.remove_unstable_features(traj)
    with _stage("bandpass"):
        spec = BandPassSpec(cfg.band_low_hz, cfg.band_high_hz, cfg.band_order)
        traj = preprocess.butterworth_bandpass(traj, spec)
    return traj


def run_extraction(filtered: FeatureTrajectories, method: str,
                   cfg: PipelineConfig) -> bss.ComponentSet:
    with _stage(f"extract:{method}"):
        return bss.extract_components(
            filtered.data, method, cfg.n_components,
            sample_rate=filtered.sample_rate, seed=cfg.seed,
            fastica_max_iter=cfg.fastica_max_iter, fastica_tol=cfg.fastica_tol,
            jade_threshold=cfg.jade_threshold,
            jade_max_sweeps=cfg.jade_max_sweeps,
            shibbs_threshold=cfg.shibbs_threshold,
            shibbs_max_passes=cfg.shibbs_max_passes)


def run_selection(components: bss.ComponentSet, cfg: PipelineConfig):
    """Normalize, optionally SSA-smooth, run the per-component template /
    MDTW / peak chain, then select and rate."""
    with _stage("normalize"):
        components = bss.normalize_components(components)
    sr = components.sample_rate
    rows = [components.components[i] for i in range(components.n_components)]
    ssa_energy = ()
    if cfg.ssa_enabled:
        with _stage("ssa"):
            window = cfg.ssa_window or ssa.default_window_length(
                components.n_samples, sr)
            ssa_energy = tuple(
                ssa.leading_energy_fraction(r, window) for r in rows)
            rows = [ssa.smooth_with_ssa(r, window) for r in rows]

    bad = [is_bad_component(r, cfg.bad_component_mode,
                            cfg.bad_component_tolerance) for r in rows]
    patterns, curves, peak_sets = [], [], []
    min_sep = int(round(cfg.peak_min_separation_seconds * sr))
    for i, row in enumerate(rows):
        with _stage(f"pattern:c{i}"):
            pat = extract_pattern(row, sr, cfg.pattern_anchors_seconds,
                                  cfg.pattern_window_seconds,
                                  source_component=i)
        with _stage(f"mdtw:c{i}"):
            curve = mdtw(row, pat, cfg.mdtw_step)
        threshold = float(np.quantile(curve.distances,
                                      cfg.peak_threshold_quantile))
        with _stage(f"peaks:c{i}"):
            peaks = detect_peaks(curve, threshold, min_sep)
        patterns.append(pat)
        curves.append(curve)
        peak_sets.append(peaks)

    with _stage("select"):
        selected, diag = select_optimal_component(
            components, peak_sets, bad, cfg.skewness_mode)
    with _stage("rate"):
        est = pulse_rate(peak_sets[selected], sr, cfg.pulse_count_mode)
    est = replace(est, selected_component=selected,
                  per_component_skewness=tuple(diag["skewness"]),
                  bad_flags=tuple(bad))
    artifacts = PipelineArtifacts(components=components, patterns=patterns,
                                  curves=curves, peak_sets=peak_sets,
                                  ssa_leading_energy=ssa_energy)
    return est, artifacts


def estimate_pulse_with_artifacts(traj: FeatureTrajectories, method: str,
                                  cfg: PipelineConfig):
    filtered = run_preprocess(traj, cfg)
    components = run_extraction(filtered, method, cfg)
    return run_selection(components, cfg)


def estimate_pulse(traj: FeatureTrajectories, method: str,
                   cfg: PipelineConfig) -> PulseEstimate:
    """Full raw-trajectories -> bpm pipeline; deterministic given the seed."""
    est, _ = estimate_pulse_with_artifacts(traj, method, cfg)
    return est


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def estimate_header(n_components: int) -> str:
    skews = ",".join(f"skew_c{i}" for i in range(n_components))
    bads = ",".join(f"bad_c{i}" for i in range(n_components))
    return f"subject,method,bpm,selected_component,n_peaks,t1,t2,{skews},{bads}"


def estimate_row(est: PulseEstimate, subject: str, method: str) -> str:
    skews = ",".join(repr(float(s)) for s in est.per_component_skewness)
    bads = ",".join(str(int(b)) for b in est.bad_flags)
    return (f"{subject},{method},{est.bpm!r},{est.selected_component},"
            f"{est.peaks.n_peaks},{est.t1!r},{est.t2!r},{skews},{bads}")


def write_estimate(est: PulseEstimate, subject: str, method: str,
                   path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(estimate_header(len(est.per_component_skewness)) + "\n")
        fh.write(estimate_row(est, subject, method) + "\n")


def write_match_curve(curve: MatchCurve, peaks: PeakSet, sample_rate: float,
                      component: int, path: str | os.PathLike) -> None:
    """Match-curve artifact CSV with peak-marker column."""
    centers = curve.positions + curve.window_length // 2
    peak_pos = set(int(p) for p in peaks.peak_indices)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# kind=match-curve step={curve.step} "
                 f"window={curve.window_length} fps={sample_rate!r} "
                 f"component={component}\n")
        fh.write("pos,dist,is_peak\n")
        for j in range(curve.positions.size):
            mark = 1 if int(centers[j]) in peak_pos else 0
            fh.write(f"{curve.positions[j]},{float(curve.distances[j])!r},"
                     f"{mark}\n")


def write_selected_component(components: bss.ComponentSet, peaks: PeakSet,
                             selected: int, path: str | os.PathLike) -> None:
    """Selected-component artifact CSV with peak-marker column."""
    row = components.components[selected]
    peak_pos = set(int(p) for p in peaks.peak_indices)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# kind=selected-component fps={components.sample_rate!r} "
                 f"component={selected}\n")
        fh.write("t,value,is_peak\n")
        for j in range(row.size):
            mark = 1 if j in peak_pos else 0
            fh.write(f"{j},{float(row[j])!r},{mark}\n")
