"""Singular spectrum analysis: trajectory-matrix SVD and partial
reconstruction by anti-diagonal averaging.

Used as an optional smoothing stage and as a smoothness diagnostic for
extracted components (how much squared singular spectrum the leading
eigentriples carry).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DataError


@dataclass(frozen=True)
class SsaDecomposition:
    """SVD of the L x (N-L+1) Hankel trajectory matrix of a series.

    ``singular_values`` descend; ``left[:, i]`` / ``right[:, i]`` are the
    i-th singular vector pair (lengths L and N-L+1).
    """

    window_length: int
    series_length: int
    singular_values: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def n_triples(self) -> int:
        return int(self.singular_values.shape[0])

    def eigentriple(self, i: int):
        return (float(self.singular_values[i]), self.left[:, i], self.right[:, i])


def trajectory_matrix(series: np.ndarray, window_length: int) -> np.ndarray:
    series = np.asarray(series, np.float64)
    n = series.shape[0]
    k = n - window_length + 1
    return np.lib.stride_tricks.sliding_window_view(series, k).copy()


def ssa_decompose(series: np.ndarray, window_length: int) -> SsaDecomposition:
    """Embed the series into its Hankel trajectory matrix and take the SVD."""
    series = np.asarray(series, np.float64)
    if series.ndim != 1:
        raise DataError(f"expected a 1-D series, got shape {series.shape}")
    n = series.shape[0]
    if not np.all(np.isfinite(series)):
        raise DataError("series contains non-finite values")
    if not np.any(series != 0.0):
        raise DataError("series must contain a non-zero value")
    if not 2 <= window_length <= n - 1:
        raise DataError(f"window length must lie in [2, {n - 1}], "
                        f"got {window_length}")
    x = trajectory_matrix(series, window_length)
    u, s, vt = np.linalg.svd(x, full_matrices=False)
    return SsaDecomposition(window_length=window_length, series_length=n,
                            singular_values=s, left=u, right=vt.T)


def ssa_reconstruct(dec: SsaDecomposition, group) -> np.ndarray:
    """Sum the selected rank-1 terms and map back to a series by
    anti-diagonal averaging. ``group`` holds 0-based eigentriple indices."""
    idx = sorted(set(int(i) for i in group))
    if not idx:
        raise DataError("eigentriple group must not be empty")
    if idx[0] < 0 or idx[-1] >= dec.n_triples:
        raise DataError(f"eigentriple index out of range 0..{dec.n_triples - 1}")
    sel = np.asarray(idx)
    mat = (dec.left[:, sel] * dec.singular_values[sel]) @ dec.right[:, sel].T
    return _kernels.hankelize(mat)


def default_window_length(n: int, sample_rate: float) -> int:
    """Window covering at least two cardiac cycles at 60 bpm, capped at N/4."""
    length = int(min(n // 4, round(2.0 * sample_rate)))
    return max(2, min(length, n - 1))


def leading_energy_fraction(series: np.ndarray, window_length: int,
                            n_lead: int = 3) -> float:
    """Fraction of squared singular spectrum carried by the first
    ``n_lead`` eigentriples; near 1.0 for smooth, low-rank components."""
    dec = ssa_decompose(series, window_length)
    total = float(np.sum(dec.singular_values ** 2))
    lead = float(np.sum(dec.singular_values[:n_lead] ** 2))
    return lead / total


def smooth_with_ssa(series: np.ndarray, window_length: int,
                    n_lead: int = 3) -> np.ndarray:
    """Partial reconstruction from the leading eigentriples."""
    dec = ssa_decompose(series, window_length)
    group = range(min(n_lead, dec.n_triples))
    return ssa_reconstruct(dec, group)
