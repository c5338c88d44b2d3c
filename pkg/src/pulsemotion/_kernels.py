"""Hot numeric kernels, in two interchangeable implementations.

Each kernel exists as a numba ``@njit`` loop version and a vectorized
pure-numpy version. The numba path is the default; set the environment
variable ``PULSEMOTION_DISABLE_NUMBA=1`` (or uninstall numba) to select
the numpy fallback. Both paths evaluate the same recurrences with the
same operand ordering, so results agree bit for bit; ``tests/test_backends.py``
and ``benchmarks/bench_backends.py`` hold them to that.

Kernels:
  - dtw_pair / mdtw_distances: Manhattan-cost dynamic time warping and the
    sliding-window scan built on it (the dominant cost of the pipeline).
  - spline_resample: natural cubic-spline upsampling of trajectory rows.
  - hankelize: anti-diagonal averaging of a trajectory matrix.
"""

from __future__ import annotations

import os

import numpy as np

ENV_DISABLE = "PULSEMOTION_DISABLE_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(ENV_DISABLE, "").strip().lower() not in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# pure-python loop bodies (compiled by numba when available)
# ---------------------------------------------------------------------------

def _dtw_pair_loops(a, b):
    n = a.shape[0]
    m = b.shape[0]
    prev = np.empty(m, np.float64)
    curr = np.empty(m, np.float64)
    prev[0] = abs(a[0] - b[0])
    for j in range(1, m):
        prev[j] = prev[j - 1] + abs(a[0] - b[j])
    for i in range(1, n):
        ai = a[i]
        curr[0] = prev[0] + abs(ai - b[0])
        for j in range(1, m):
            best = prev[j - 1]          # diagonal move
            if prev[j] < best:          # advance pattern only
                best = prev[j]
            if curr[j - 1] < best:      # advance window only
                best = curr[j - 1]
            curr[j] = abs(ai - b[j]) + best
        prev, curr = curr, prev
    return prev[m - 1]


def _mdtw_loops(pattern, component, step, n_windows):
    w = pattern.shape[0]
    out = np.empty(n_windows, np.float64)
    for k in range(n_windows):
        s = k * step
        out[k] = _dtw_pair_loops(pattern, component[s:s + w])
    return out


def _spline_resample_loops(rows, factor):
    nrow, t = rows.shape
    nint = t - 2
    out = np.empty((nrow, (t - 1) * factor + 1), np.float64)
    cp = np.empty(nint, np.float64)
    dp = np.empty(nint, np.float64)
    m = np.empty(t, np.float64)
    for f in range(nrow):
        y = rows[f]
        # Thomas solve of the natural-spline tridiagonal system (unit knot
        # spacing): M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1])
        cp[0] = 1.0 / 4.0
        dp[0] = 6.0 * ((y[2] - 2.0 * y[1]) + y[0]) / 4.0
        for i in range(1, nint):
            denom = 4.0 - cp[i - 1]
            cp[i] = 1.0 / denom
            rhs = 6.0 * ((y[i + 2] - 2.0 * y[i + 1]) + y[i])
            dp[i] = (rhs - dp[i - 1]) / denom
        m[0] = 0.0
        m[t - 1] = 0.0
        m[nint] = dp[nint - 1]
        for i in range(nint - 2, -1, -1):
            m[i + 1] = dp[i] - cp[i] * m[i + 2]
        for i in range(t - 1):
            bi = (y[i + 1] - y[i]) - (2.0 * m[i] + m[i + 1]) / 6.0
            ci = m[i] / 2.0
            di = (m[i + 1] - m[i]) / 6.0
            base = i * factor
            for p in range(factor):
                u = p / factor
                out[f, base + p] = y[i] + u * (bi + u * (ci + u * di))
        out[f, (t - 1) * factor] = y[t - 1]
    return out


def _hankelize_loops(mat):
    ell, k = mat.shape
    n = ell + k - 1
    acc = np.zeros(n, np.float64)
    cnt = np.zeros(n, np.float64)
    for i in range(ell):
        for j in range(k):
            s = i + j
            acc[s] += mat[i, j]
            cnt[s] += 1.0
    return acc / cnt


# ---------------------------------------------------------------------------
# vectorized numpy fallbacks
# ---------------------------------------------------------------------------

def dtw_batch_numpy(pattern: np.ndarray, windows: np.ndarray) -> np.ndarray:
    """DTW cost of ``pattern`` against each row of ``windows``.

    Anti-diagonal wavefront over the DP table, vectorized across windows.
    Matches the loop kernel's operand order exactly.
    """
    p = np.ascontiguousarray(pattern, np.float64)
    w = np.asarray(windows, np.float64)
    n = p.shape[0]
    nb, m = w.shape
    inf = np.inf
    d_prev2 = np.empty((nb, n))
    d_prev = np.empty((nb, n))
    d_curr = np.empty((nb, n))
    for d in range(n + m - 1):
        i_lo = max(0, d - m + 1)
        i_hi = min(n - 1, d)
        length = i_hi - i_lo + 1
        # window samples aligned with ascending i (j = d - i descends)
        seg = w[:, d - i_hi:d - i_lo + 1][:, ::-1]
        cost = np.abs(p[i_lo:i_hi + 1][None, :] - seg)
        if d == 0:
            d_curr[:, 0] = cost[:, 0]
        else:
            up = np.full((nb, length), inf)
            left = np.full((nb, length), inf)
            diag = np.full((nb, length), inf)
            a = max(i_lo, 1)                   # first i with an "up" move
            b = min(i_hi, d - 1)               # last i with a "left" move
            if a <= i_hi:
                up[:, a - i_lo:] = d_prev[:, a - 1:i_hi]
            if b >= i_lo:
                left[:, :b - i_lo + 1] = d_prev[:, i_lo:b + 1]
            if a <= b:
                diag[:, a - i_lo:b - i_lo + 1] = d_prev2[:, a - 1:b]
            d_curr[:, i_lo:i_hi + 1] = cost + np.minimum(np.minimum(diag, up), left)
        d_prev2, d_prev, d_curr = d_prev, d_curr, d_prev2
    return d_prev[:, n - 1].copy()


def dtw_pair_numpy(a: np.ndarray, b: np.ndarray) -> float:
    return float(dtw_batch_numpy(np.asarray(a, np.float64),
                                 np.asarray(b, np.float64)[None, :])[0])


def mdtw_numpy(pattern: np.ndarray, component: np.ndarray, step: int,
               n_windows: int) -> np.ndarray:
    w = pattern.shape[0]
    windows = np.lib.stride_tricks.sliding_window_view(component, w)[::step]
    return dtw_batch_numpy(pattern, windows[:n_windows])


def spline_resample_numpy(rows: np.ndarray, factor: int) -> np.ndarray:
    rows = np.asarray(rows, np.float64)
    nrow, t = rows.shape
    nint = t - 2
    y = rows
    rhs = 6.0 * ((y[:, 2:] - 2.0 * y[:, 1:-1]) + y[:, :-2])
    cp = np.empty(nint)
    dp = np.empty((nrow, nint))
    cp[0] = 1.0 / 4.0
    dp[:, 0] = rhs[:, 0] / 4.0
    for i in range(1, nint):
        denom = 4.0 - cp[i - 1]
        cp[i] = 1.0 / denom
        dp[:, i] = (rhs[:, i] - dp[:, i - 1]) / denom
    m = np.zeros((nrow, t))
    m[:, nint] = dp[:, nint - 1]
    for i in range(nint - 2, -1, -1):
        m[:, i + 1] = dp[:, i] - cp[i] * m[:, i + 2]
    b = (y[:, 1:] - y[:, :-1]) - (2.0 * m[:, :-1] + m[:, 1:]) / 6.0
    c = m[:, :-1] / 2.0
    dcoef = (m[:, 1:] - m[:, :-1]) / 6.0
    out = np.empty((nrow, (t - 1) * factor + 1))
    for p in range(factor):
        u = p / factor
        out[:, p::factor][:, :t - 1] = y[:, :-1] + u * (b + u * (c + u * dcoef))
    out[:, -1] = y[:, -1]
    return out


def hankelize_numpy(mat: np.ndarray) -> np.ndarray:
    mat = np.asarray(mat, np.float64)
    ell, k = mat.shape
    n = ell + k - 1
    idx = (np.arange(ell)[:, None] + np.arange(k)[None, :]).ravel()
    acc = np.bincount(idx, weights=mat.ravel(), minlength=n)
    cnt = np.bincount(idx, minlength=n).astype(np.float64)
    return acc / cnt


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

USING_NUMBA = False
dtw_pair_numba = None
mdtw_numba = None
spline_resample_numba = None
hankelize_numba = None

if _numba_requested():
    try:
        from numba import njit
    except ImportError:
        njit = None
    if njit is not None:
        dtw_pair_numba = njit(cache=True)(_dtw_pair_loops)

        # _mdtw_loops calls _dtw_pair_loops; rebind to the jitted version so
        # the whole scan stays in nopython mode.
        def _mdtw_loops_jit(pattern, component, step, n_windows):
            w = pattern.shape[0]
            out = np.empty(n_windows, np.float64)
            for k in range(n_windows):
                s = k * step
                out[k] = dtw_pair_numba(pattern, component[s:s + w])
            return out

        mdtw_numba = njit(cache=True)(_mdtw_loops_jit)
        spline_resample_numba = njit(cache=True)(_spline_resample_loops)
        hankelize_numba = njit(cache=True)(_hankelize_loops)
        USING_NUMBA = True


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def dtw_pair(a: np.ndarray, b: np.ndarray) -> float:
    if USING_NUMBA:
        return float(dtw_pair_numba(_f64(a), _f64(b)))
    return dtw_pair_numpy(a, b)


def mdtw_distances(pattern: np.ndarray, component: np.ndarray, step: int,
                   n_windows: int) -> np.ndarray:
    if USING_NUMBA:
        return mdtw_numba(_f64(pattern), _f64(component), step, n_windows)
    return mdtw_numpy(_f64(pattern), _f64(component), step, n_windows)


def spline_resample(rows: np.ndarray, factor: int) -> np.ndarray:
    if USING_NUMBA:
        return spline_resample_numba(_f64(np.atleast_2d(rows)), factor)
    return spline_resample_numpy(np.atleast_2d(rows), factor)


def hankelize(mat: np.ndarray) -> np.ndarray:
    if USING_NUMBA:
        return hankelize_numba(_f64(mat))
    return hankelize_numpy(mat)
