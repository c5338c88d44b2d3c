"""Blind source separation of the filtered feature matrix.

Four extraction routes share one contract: decompose an N x T matrix into a
small ComponentSet (five rows by default) whose rows are pairwise
uncorrelated. PCA projects onto leading covariance eigenvectors; FastICA,
JADE and SHIBBS whiten first and then search for a rotation that maximizes
statistical independence (fixed-point contrast iteration for FastICA, joint
diagonalization of fourth-order cumulant matrices for JADE and SHIBBS).

All functions are deterministic: randomness enters only through explicit
seeds, and ICA row order is fixed by sorting on excess-kurtosis magnitude.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DataError, RankDeficiencyError

METHODS = ("pca", "fastica", "jade", "shibbs")

_RANK_RTOL = 1e-12


@dataclass(frozen=True)
class WhiteningTransform:
    """Affine map taking raw rows to zero-mean, unit-covariance coordinates."""

    mean: np.ndarray      # length N
    matrix: np.ndarray    # K x N

    def apply(self, data: np.ndarray) -> np.ndarray:
        return self.matrix @ (np.asarray(data, np.float64) - self.mean[:, None])


@dataclass(frozen=True)
class ComponentSet:
    """K x T' matrix of extracted source signals with provenance."""

    components: np.ndarray
    method: str
    sample_rate: float
    normalized: bool
    transform: WhiteningTransform | None = None
    unmixing: np.ndarray | None = None   # K x N, maps centered data to rows

    def __post_init__(self):
        arr = np.asarray(self.components, np.float64)
        if arr.ndim != 2:
            raise DataError(f"components must be 2-D, got shape {arr.shape}")
        if self.method not in METHODS:
            raise DataError(f"unknown method {self.method!r}")
        object.__setattr__(self, "components", arr)

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    @property
    def n_samples(self) -> int:
        return self.components.shape[1]


def _is_normalized(rows: np.ndarray, tol: float = 1e-6) -> bool:
    return bool(np.all(np.abs(rows.mean(axis=1)) < tol)
                and np.all(np.abs(rows.std(axis=1) - 1.0) < tol))


def normalize_components(cs: ComponentSet) -> ComponentSet:
    """Zero-mean, unit-variance copy (rows with zero variance are rejected)."""
    rows = cs.components
    std = rows.std(axis=1)
    if np.any(std == 0.0):
        raise DataError("cannot normalize a constant component")
    rows = (rows - rows.mean(axis=1, keepdims=True)) / std[:, None]
    return ComponentSet(rows, cs.method, cs.sample_rate, True,
                        cs.transform, cs.unmixing)


# ---------------------------------------------------------------------------
# whitening / PCA
# ---------------------------------------------------------------------------

def _fix_vector_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude loading of each row positive (in place)."""
    for row in vectors:
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            row *= -1.0
    return vectors


def _covariance_eig(data: np.ndarray):
    """Centered data, eigenvalues (descending) and eigenvectors of X X^T / T."""
    x = np.asarray(data, np.float64)
    if x.ndim != 2:
        raise DataError(f"expected an N x T matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DataError("input matrix contains non-finite values")
    mean = x.mean(axis=1)
    centered = x - mean[:, None]
    cov = centered @ centered.T / x.shape[1]
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1]
    return mean, centered, vals[order], vecs[:, order]


def _achievable_rank(vals: np.ndarray) -> int:
    if vals.size == 0 or vals[0] <= 0.0:
        return 0
    return int(np.sum(vals > vals[0] * _RANK_RTOL))


def whiten(data: np.ndarray, k: int) -> tuple[np.ndarray, WhiteningTransform]:
    """Project to the top-k covariance eigen-directions and rescale so the
    sample covariance (convention: X X^T / T) is the identity."""
    if k < 1:
        raise DataError(f"k must be positive, got {k}")
    mean, centered, vals, vecs = _covariance_eig(data)
    if data.shape[0] < k or _achievable_rank(vals) < k:
        raise RankDeficiencyError(k, min(_achievable_rank(vals), data.shape[0]))
    basis = _fix_vector_signs(vecs[:, :k].T.copy())
    matrix = basis / np.sqrt(vals[:k])[:, None]
    transform = WhiteningTransform(mean=mean, matrix=matrix)
    return matrix @ centered, transform


def pca_components(data: np.ndarray, k: int,
                   sample_rate: float = 1.0) -> ComponentSet:
    """Projections onto the top-k covariance eigenvectors, by falling
    eigenvalue; each eigenvector's largest-magnitude loading is positive."""
    if k < 1:
        raise DataError(f"k must be positive, got {k}")
    mean, centered, vals, vecs = _covariance_eig(data)
    if data.shape[0] < k or _achievable_rank(vals) < k:
        raise RankDeficiencyError(k, min(_achievable_rank(vals), data.shape[0]))
    basis = _fix_vector_signs(vecs[:, :k].T.copy())
    comps = basis @ centered
    return ComponentSet(comps, "pca", sample_rate, _is_normalized(comps),
                        transform=None, unmixing=basis)


# ---------------------------------------------------------------------------
# FastICA
# ---------------------------------------------------------------------------

def _random_orthogonal(k: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    return q * np.sign(np.diag(r))


def _symmetric_orthogonalize(w: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(w @ w.T)
    if vals[0] <= 0.0:
        raise RankDeficiencyError(w.shape[0], _achievable_rank(vals[::-1]))
    return (vecs / np.sqrt(vals)) @ vecs.T @ w


def fastica_components(data: np.ndarray, k: int, seed: int = 0,
                       max_iter: int = 1000, tol: float = 1e-5,
                       sample_rate: float = 1.0) -> ComponentSet:
    """Symmetric fixed-point ICA with the log-cosh contrast.

    Converged when every unmixing row aligns with its previous iterate to
    within ``tol``; raises ConvergenceError (carrying the last estimate)
    otherwise, e.g. for all-Gaussian inputs where the rotation is
    unidentifiable.
    """
    z, transform = whiten(data, k)
    t = z.shape[1]
    w = _random_orthogonal(k, seed)
    converged = False
    for _ in range(max_iter):
        wz = w @ z
        g = np.tanh(wz)
        g_prime = 1.0 - g * g
        w_new = _symmetric_orthogonalize(
            (g @ z.T) / t - g_prime.mean(axis=1)[:, None] * w)
        drift = float(np.max(np.abs(1.0 - np.abs(np.sum(w_new * w, axis=1)))))
        w = w_new
        if drift < tol:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"fastica did not converge in {max_iter} iterations "
            f"(last alignment drift {drift:.3e})",
            last_estimate=w @ transform.matrix)
    return _finish_rotation(w, z, transform, "fastica", sample_rate)


# ---------------------------------------------------------------------------
# cumulant machinery shared by JADE and SHIBBS
# ---------------------------------------------------------------------------

def fourth_order_cumulant_matrices(z: np.ndarray) -> np.ndarray:
    """The parallel set of k(k+1)/2 symmetric cumulant matrix slices of
    whitened data ``z`` (k x T), stacked as (n_matrices, k, k)."""
    z = np.asarray(z, np.float64)
    k, t = z.shape
    eye = np.eye(k)
    mats = np.empty((k * (k + 1) // 2, k, k))
    idx = 0
    for i in range(k):
        zi = z[i]
        mats[idx] = ((zi * zi) * z) @ z.T / t - eye - 2.0 * np.outer(eye[i], eye[i])
        idx += 1
        for j in range(i):
            m = ((zi * z[j]) * z) @ z.T / t \
                - np.outer(eye[i], eye[j]) - np.outer(eye[j], eye[i])
            mats[idx] = np.sqrt(2.0) * m
            idx += 1
    return mats


def source_cumulant_matrices(y: np.ndarray) -> np.ndarray:
    """The k source-conditioned cumulant matrices of current estimates ``y``
    (the diagonal slices only), stacked as (k, k, k)."""
    y = np.asarray(y, np.float64)
    k, t = y.shape
    eye = np.eye(k)
    mats = np.empty((k, k, k))
    for i in range(k):
        yi = y[i]
        mats[i] = ((yi * yi) * y) @ y.T / t - eye - 2.0 * np.outer(eye[i], eye[i])
    return mats


def joint_diagonalize(mats: np.ndarray, threshold: float = 1e-6,
                      max_sweeps: int = 100):
    """Jacobi joint diagonalization of a stack of symmetric matrices.

    Sweeps Givens rotations over all index pairs, applying any rotation
    whose angle exceeds ``threshold``, until a full sweep applies none.

    Returns ``(v, rotated, sweeps, rotations)`` where ``v`` is the
    accumulated rotation with ``v.T @ m @ v`` maximally diagonal.
    """
    cm = np.array(mats, dtype=np.float64, copy=True)
    k = cm.shape[1]
    v = np.eye(k)
    rotations = 0
    sweeps = 0
    for _ in range(max_sweeps):
        sweeps += 1
        applied = 0
        for p in range(k - 1):
            for q in range(p + 1, k):
                g1 = cm[:, p, p] - cm[:, q, q]
                g2 = cm[:, p, q] + cm[:, q, p]
                ton = g1 @ g1 - g2 @ g2
                toff = 2.0 * (g1 @ g2)
                theta = 0.5 * np.arctan2(
                    toff, ton + np.sqrt(ton * ton + toff * toff))
                if abs(theta) > threshold:
                    applied += 1
                    c, s = np.cos(theta), np.sin(theta)
                    rp, rq = cm[:, p, :].copy(), cm[:, q, :].copy()
                    cm[:, p, :] = c * rp + s * rq
                    cm[:, q, :] = -s * rp + c * rq
                    cp, cq = cm[:, :, p].copy(), cm[:, :, q].copy()
                    cm[:, :, p] = c * cp + s * cq
                    cm[:, :, q] = -s * cp + c * cq
                    vp, vq = v[:, p].copy(), v[:, q].copy()
                    v[:, p] = c * vp + s * vq
                    v[:, q] = -s * vp + c * vq
        rotations += applied
        if applied == 0:
            break
    return v, cm, sweeps, rotations


def off_diagonal_energy(mats: np.ndarray) -> float:
    """Sum of squared off-diagonal entries over a stack of matrices."""
    mats = np.asarray(mats, np.float64)
    k = mats.shape[1]
    mask = ~np.eye(k, dtype=bool)
    return float(np.sum(mats[:, mask] ** 2))


def jade_components(data: np.ndarray, k: int, threshold: float = 1e-6,
                    max_sweeps: int = 100,
                    sample_rate: float = 1.0) -> ComponentSet:
    """Whiten, estimate the parallel cumulant set once, and jointly
    diagonalize it by Givens sweeps."""
    z, transform = whiten(data, k)
    mats = fourth_order_cumulant_matrices(z)
    v, _, _, _ = joint_diagonalize(mats, threshold, max_sweeps)
    return _finish_rotation(v.T, z, transform, "jade", sample_rate)


def shibbs_components(data: np.ndarray, k: int,
                      threshold: float | None = None,
                      max_passes: int = 1000, inner_sweeps: int = 100,
                      sample_rate: float = 1.0) -> ComponentSet:
    """Shifted-block separation: instead of diagonalizing the full parallel
    set once, re-estimate the k source-conditioned cumulant matrices from the
    current source estimates on every pass, diagonalize, rotate, and repeat
    until a pass applies no rotation above ``threshold``.

    ``threshold=None`` uses the statistically scaled angle 1e-6/sqrt(T).
    Same separation contract as JADE, traded for many passes over the data.
    """
    z, transform = whiten(data, k)
    if threshold is None:
        threshold = 1e-6 / np.sqrt(z.shape[1])
    v = np.eye(k)
    converged = False
    for _ in range(max_passes):
        y = v.T @ z
        mats = source_cumulant_matrices(y)
        vp, _, _, rotations = joint_diagonalize(mats, threshold, inner_sweeps)
        if rotations == 0:
            converged = True
            break
        v = v @ vp
    if not converged:
        raise ConvergenceError(
            f"shibbs did not converge in {max_passes} passes",
            last_estimate=v.T @ transform.matrix)
    return _finish_rotation(v.T, z, transform, "shibbs", sample_rate)


def _finish_rotation(w: np.ndarray, z: np.ndarray,
                     transform: WhiteningTransform, method: str,
                     sample_rate: float) -> ComponentSet:
    """Order rotated sources by excess-kurtosis magnitude, fix signs, and
    package the result."""
    sources = w @ z
    kurt = np.mean(sources ** 4, axis=1) - 3.0
    # sample excess kurtosis of a Gaussian fluctuates with std sqrt(24/T);
    # nothing clearing 5 sigma means the rotation found no real structure
    if np.max(np.abs(kurt)) < 5.0 * np.sqrt(24.0 / sources.shape[1]):
        warnings.warn(
            f"{method}: no component shows non-Gaussian structure; the "
            f"rotation is arbitrary and the separation unreliable",
            stacklevel=3)
    order = np.argsort(-np.abs(kurt), kind="stable")
    unmixing = (w @ transform.matrix)[order]
    sources = sources[order]
    # sign convention: largest-magnitude unmixing loading positive, with the
    # matching component row flipped so rows stay consistent
    for i, row in enumerate(unmixing):
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            unmixing[i] = -row
            sources[i] = -sources[i]
    return ComponentSet(sources, method, sample_rate, _is_normalized(sources),
                        transform=transform, unmixing=unmixing)


def extract_components(data: np.ndarray, method: str, k: int,
                       sample_rate: float = 1.0, seed: int = 0,
                       fastica_max_iter: int = 1000, fastica_tol: float = 1e-5,
                       jade_threshold: float = 1e-6, jade_max_sweeps: int = 100,
                       shibbs_threshold: float | None = None,
                       shibbs_max_passes: int = 1000) -> ComponentSet:
    """Dispatch to one of the four extraction methods."""
    if method == "pca":
        return pca_components(data, k, sample_rate)
    if method == "fastica":
        return fastica_components(data, k, seed, fastica_max_iter,
                                  fastica_tol, sample_rate)
    if method == "jade":
        return jade_components(data, k, jade_threshold, jade_max_sweeps,
                               sample_rate)
    if method == "shibbs":
        return shibbs_components(data, k, shibbs_threshold, shibbs_max_passes,
                                 sample_rate=sample_rate)
    raise DataError(f"unknown method {method!r}; expected one of {METHODS}")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def write_components(cs: ComponentSet, path: str | os.PathLike) -> None:
    """CSV form: comment header with method and fps, then one row per sample
    (``t`` is the 0-based sample index)."""
    k, t = cs.components.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# method={cs.method} fps={cs.sample_rate!r}\n")
        fh.write("t," + ",".join(f"c{i}" for i in range(k)) + "\n")
        for j in range(t):
            fh.write(f"{j}," + ",".join(repr(float(v))
                                         for v in cs.components[:, j]) + "\n")


def read_components(path: str | os.PathLike) -> ComponentSet:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if len(lines) < 3 or not lines[0].startswith("#"):
        raise DataError(f"{path}: not a component CSV")
    meta = {}
    for tok in lines[0][1:].split():
        if "=" in tok:
            key, val = tok.split("=", 1)
            meta[key] = val
    if "method" not in meta or "fps" not in meta:
        raise DataError(f"{path}: line 1: header must carry method= and fps=")
    header = lines[1].split(",")
    if header[0] != "t":
        raise DataError(f"{path}: line 2: expected 't,c0,...' header")
    k = len(header) - 1
    rows = []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != k + 1:
            raise DataError(f"{path}: line {lineno}: expected {k + 1} fields")
        try:
            rows.append([float(p) for p in parts[1:]])
        except ValueError as exc:
            raise DataError(f"{path}: line {lineno}: {exc}") from exc
    comps = np.asarray(rows, np.float64).T
    return ComponentSet(comps, meta["method"], float(meta["fps"]),
                        _is_normalized(comps))
