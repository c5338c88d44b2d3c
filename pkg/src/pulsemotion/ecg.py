"""ECG ground truth: R-peak detection and beat rate from raw amplitude text.

The detector is deliberately simple plumbing: band-pass to the QRS band,
take the envelope, threshold against a rolling quantile, and enforce a
refractory gap. The rate uses the same interval convention as the pulse
pipeline, so ground truth and estimates are directly comparable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy import ndimage, signal

from .errors import DataError, GroundTruthUnavailableError

QRS_BAND_HZ = (5.0, 18.0)
QRS_ORDER = 3
REFRACTORY_SECONDS = 0.25
ROLLING_WINDOW_SECONDS = 2.0
ROLLING_QUANTILE = 99.0
THRESHOLD_FRACTION = 0.5


@dataclass(frozen=True)
class EcgRecord:
    samples: np.ndarray
    sample_rate: float = 250.0

    def __post_init__(self):
        arr = np.asarray(self.samples, np.float64)
        if arr.ndim != 1:
            raise DataError(f"ECG record must be 1-D, got shape {arr.shape}")
        if self.sample_rate <= 0:
            raise DataError(f"sample_rate must be positive, got {self.sample_rate}")
        if arr.size < 2 * self.sample_rate:
            raise DataError("ECG record shorter than 2 seconds")
        if not np.all(np.isfinite(arr)):
            raise DataError("ECG record contains non-finite values")
        object.__setattr__(self, "samples", arr)

    @property
    def duration_seconds(self) -> float:
        return self.samples.size / self.sample_rate


def read_ecg(path: str | os.PathLike, sample_rate: float = 250.0) -> EcgRecord:
    """One amplitude per line; blank lines ignored."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from exc
    if not values:
        raise DataError(f"{path}: empty ECG file")
    return EcgRecord(np.asarray(values), sample_rate)


def detect_r_peaks(ecg: EcgRecord) -> np.ndarray:
    """Sample indices of R peaks, at least the refractory gap apart."""
    sr = ecg.sample_rate
    if np.ptp(ecg.samples) == 0.0:
        return np.empty(0, dtype=np.int64)
    x = ecg.samples - ecg.samples.mean()
    high = min(QRS_BAND_HZ[1], 0.45 * sr)
    sos = signal.butter(QRS_ORDER, [QRS_BAND_HZ[0], high], btype="bandpass",
                        fs=sr, output="sos")
    envelope = np.abs(signal.sosfiltfilt(sos, x))
    window = max(3, int(round(ROLLING_WINDOW_SECONDS * sr)) | 1)
    rolling = ndimage.percentile_filter(envelope, ROLLING_QUANTILE,
                                        size=window, mode="nearest")
    thresh = THRESHOLD_FRACTION * rolling
    interior = np.zeros(envelope.size, dtype=bool)
    interior[1:-1] = (envelope[1:-1] > envelope[:-2]) \
        & (envelope[1:-1] >= envelope[2:]) & (envelope[1:-1] >= thresh[1:-1])
    candidates = np.flatnonzero(interior)
    if candidates.size == 0:
        return candidates
    order = np.argsort(-envelope[candidates], kind="stable")
    refractory = int(round(REFRACTORY_SECONDS * sr))
    accepted: list[int] = []
    for c in candidates[order]:
        if all(abs(int(c) - a) >= refractory for a in accepted):
            accepted.append(int(c))
    return np.asarray(sorted(accepted), dtype=np.int64)


def ecg_ground_truth_bpm(ecg: EcgRecord) -> float:
    """Interval-count beat rate over the spanned interval of detected
    R peaks; raises GroundTruthUnavailableError below 2 peaks."""
    peaks = detect_r_peaks(ecg)
    if peaks.size < 2:
        raise GroundTruthUnavailableError(
            f"found {peaks.size} R peak(s); ground truth unavailable")
    span = (peaks[-1] - peaks[0]) / ecg.sample_rate
    return 60.0 / span * (peaks.size - 1)
