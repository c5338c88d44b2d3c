"""Preprocessing chain: spline upsampling, unstable-feature rejection,
zero-phase Butterworth band-pass.

Each step consumes a :class:`FeatureTrajectories` at one origin stage and
produces the next stage; rows are processed independently, so the chain is
safe to parallelize per feature without changing results.
"""

from __future__ import annotations

import numpy as np
from scipy import signal

from . import _kernels
from .errors import DataError
from .trajectories import BandPassSpec, FeatureTrajectories


def cubic_spline_resample(traj: FeatureTrajectories,
                          factor: int) -> FeatureTrajectories:
    """Upsample every feature row by a natural cubic spline.

    The output grid has (T-1)*factor + 1 points spanning the original time
    range, so endpoints are preserved exactly and the sample rate is
    multiplied by ``factor``.
    """
    if traj.origin != "raw":
        raise DataError(f"resampling expects raw trajectories, got "
                        f"origin={traj.origin!r}")
    if factor < 1:
        raise DataError(f"interpolation factor must be >= 1, got {factor}")
    if traj.n_samples < 3:
        # natural boundary conditions make the spline well-posed from 3
        # samples; below that there is nothing cubic to fit
        raise DataError(f"spline resampling needs at least 3 samples per row, "
                        f"got {traj.n_samples}")
    if factor == 1:
        out = traj.data.copy()
    else:
        out = _kernels.spline_resample(traj.data, factor)
    return traj.advanced(out, "interpolated",
                         sample_rate=traj.sample_rate * factor)


def max_consecutive_displacement(data: np.ndarray) -> np.ndarray:
    """Per-row maximum |x[t+1] - x[t]|, rounded to the nearest pixel."""
    disp = np.max(np.abs(np.diff(data, axis=1)), axis=1)
    return np.rint(disp).astype(np.int64)


def remove_unstable_features(traj: FeatureTrajectories) -> FeatureTrajectories:
    """Keep only features whose rounded peak frame-to-frame displacement does
    not exceed the mode of that distribution.

    Ties between equally frequent displacement values resolve to the smaller
    value (strictest retention). The mode itself is always retained, so the
    output is never empty for valid input; the guard below is defensive.
    """
    if traj.origin != "interpolated":
        raise DataError(f"stability rejection expects interpolated "
                        f"trajectories, got origin={traj.origin!r}")
    rounded = max_consecutive_displacement(traj.data)
    values, counts = np.unique(rounded, return_counts=True)
    mode = values[np.argmax(counts)]  # np.unique sorts: first argmax is smallest
    keep = rounded <= mode
    if not np.any(keep):
        raise DataError("all features rejected as unstable; relax the "
                        "retention criterion or re-track")
    return traj.advanced(traj.data[keep], "stable")


def butterworth_bandpass(traj: FeatureTrajectories,
                         spec: BandPassSpec) -> FeatureTrajectories:
    """Zero-phase band-pass of every row.

    Designed with the bilinear transform (pre-warped), applied forward and
    backward so peak timing is not shifted.
    """
    if traj.origin != "stable":
        raise DataError(f"band-pass expects stable trajectories, got "
                        f"origin={traj.origin!r}")
    spec.validate(traj.sample_rate)
    sos = signal.butter(spec.order, [spec.low_hz, spec.high_hz],
                        btype="bandpass", fs=traj.sample_rate, output="sos")
    # pad by a few low-cutoff periods to keep filtfilt onset ringing out of
    # the analyzed samples
    padlen = min(traj.n_samples - 1,
                 int(round(3.0 * traj.sample_rate / spec.low_hz)))
    out = signal.sosfiltfilt(sos, traj.data, axis=1, padlen=padlen)
    return traj.advanced(out, "filtered")


def preprocess(traj: FeatureTrajectories, factor: int,
               spec: BandPassSpec) -> FeatureTrajectories:
    """Full raw -> filtered chain with the given parameters."""
    return butterworth_bandpass(
        remove_unstable_features(cubic_spline_resample(traj, factor)), spec)
