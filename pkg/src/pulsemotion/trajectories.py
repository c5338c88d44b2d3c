"""Feature-trajectory container and its CSV interchange format.

The trajectory file format (consumed and produced by every tool in this
package, including the tracker frontend):

    # fps=<float> origin=<raw|interpolated|stable|filtered>
    frame,f0,f1,...,f{F-1}
    0,12.0,88.5,...
    1,12.1,88.4,...

One row per frame, one column per tracked feature (vertical position in
pixels). Missing values are not permitted.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DataError

ORIGINS = ("raw", "interpolated", "stable", "filtered")


@dataclass(frozen=True)
class FeatureTrajectories:
    """F x T matrix of vertical feature positions plus sampling rate.

    ``origin`` records how far along the preprocessing chain the data is;
    it only ever advances raw -> interpolated -> stable -> filtered.
    """

    data: np.ndarray
    sample_rate: float
    origin: str = "raw"

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise DataError(f"trajectory data must be 2-D, got shape {arr.shape}")
        f, t = arr.shape
        if f < 1 or t < 2:
            raise DataError(f"need at least 1 feature and 2 frames, got {f}x{t}")
        if not np.all(np.isfinite(arr)):
            raise DataError("trajectory data contains non-finite values")
        if self.sample_rate <= 0:
            raise DataError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.origin not in ORIGINS:
            raise DataError(f"unknown origin {self.origin!r}")
        object.__setattr__(self, "data", arr)

    @property
    def n_features(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_seconds(self) -> float:
        return (self.n_samples - 1) / self.sample_rate

    def advanced(self, data: np.ndarray, origin: str,
                 sample_rate: float | None = None) -> "FeatureTrajectories":
        """Copy with new data and an origin one or more steps forward."""
        if ORIGINS.index(origin) <= ORIGINS.index(self.origin):
            raise DataError(
                f"origin may only advance ({self.origin!r} -> {origin!r} rejected)")
        return FeatureTrajectories(
            data=data,
            sample_rate=self.sample_rate if sample_rate is None else sample_rate,
            origin=origin,
        )


def read_trajectories(path: str | os.PathLike) -> FeatureTrajectories:
    """Parse a trajectory CSV, naming the offending line on any format error."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if len(lines) < 3:
        raise DataError(f"{path}: expected header comment, column header and "
                        f"at least one data row")
    meta = _parse_meta(lines[0], path)
    header = lines[1].split(",")
    if header[0] != "frame" or len(header) < 2:
        raise DataError(f"{path}: line 2: column header must be "
                        f"'frame,f0,f1,...'")
    n_feat = len(header) - 1
    for i, name in enumerate(header[1:]):
        if name != f"f{i}":
            raise DataError(f"{path}: line 2: expected column 'f{i}', got {name!r}")
    rows = []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != n_feat + 1:
            raise DataError(f"{path}: line {lineno}: expected {n_feat + 1} "
                            f"fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts[1:]])
        except ValueError as exc:
            raise DataError(f"{path}: line {lineno}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=np.float64).T  # rows were frames
    try:
        return FeatureTrajectories(data=data, sample_rate=meta["fps"],
                                   origin=meta["origin"])
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from exc


def _parse_meta(line: str, path) -> dict:
    if not line.startswith("#"):
        raise DataError(f"{path}: line 1: expected comment header "
                        f"'# fps=... origin=...'")
    meta = {}
    for tok in line[1:].split():
        if "=" in tok:
            key, val = tok.split("=", 1)
            meta[key] = val
    if "fps" not in meta or "origin" not in meta:
        raise DataError(f"{path}: line 1: header must carry fps= and origin=")
    try:
        fps = float(meta["fps"])
    except ValueError as exc:
        raise DataError(f"{path}: line 1: bad fps value {meta['fps']!r}") from exc
    if meta["origin"] not in ORIGINS:
        raise DataError(f"{path}: line 1: bad origin {meta['origin']!r}")
    return {"fps": fps, "origin": meta["origin"]}


def write_trajectories(traj: FeatureTrajectories, path: str | os.PathLike) -> None:
    """Write the CSV form; floats use repr so a round trip is bit-exact."""
    f, t = traj.data.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# fps={traj.sample_rate!r} origin={traj.origin}\n")
        fh.write("frame," + ",".join(f"f{i}" for i in range(f)) + "\n")
        for j in range(t):
            vals = ",".join(repr(float(v)) for v in traj.data[:, j])
            fh.write(f"{j},{vals}\n")


@dataclass(frozen=True)
class BandPassSpec:
    """Digital Butterworth band-pass design parameters."""

    low_hz: float = 0.75
    high_hz: float = 5.0
    order: int = 5

    def validate(self, sample_rate: float) -> None:
        if self.order < 1:
            raise DataError(f"filter order must be >= 1, got {self.order}")
        if not (0.0 < self.low_hz < self.high_hz):
            raise DataError(
                f"band edges must satisfy 0 < low < high, got "
                f"{self.low_hz}..{self.high_hz}")
        if self.high_hz >= sample_rate / 2.0:
            raise DataError(
                f"high_hz={self.high_hz} must be below the Nyquist rate "
                f"{sample_rate / 2.0}")
