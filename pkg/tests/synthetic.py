"""Seeded generators for synthetic trajectories, ECG records and datasets."""

from __future__ import annotations

import numpy as np

from pulsemotion import FeatureTrajectories, write_trajectories


def pulse_waveform(t: np.ndarray, pulse_hz: float, phase: float) -> np.ndarray:
    """Saturated sinusoid: low crest factor, odd harmonics only. Stands in
    for the smooth ballistic head recoil of a heartbeat."""
    return np.tanh(3.0 * np.sin(2.0 * np.pi * pulse_hz * t + phase))


def synthetic_trajectories(seed: int, n_features: int = 40, fps: float = 25.0,
                           duration: float = 60.0, pulse_hz: float = 1.2,
                           resp_hz: float = 0.3,
                           snr_db: float = 10.0) -> FeatureTrajectories:
    """Feature rows mixing a pulse source and a respiration source plus
    Gaussian noise at the requested per-feature SNR."""
    rng = np.random.default_rng(seed)
    t = np.arange(int(duration * fps)) / fps
    pulse = pulse_waveform(t, pulse_hz, rng.uniform(0.0, 2.0 * np.pi))
    resp = np.sin(2.0 * np.pi * resp_hz * t + rng.uniform(0.0, 2.0 * np.pi))
    mix = rng.uniform(0.5, 1.5, size=(n_features, 2)) \
        * rng.choice([-1.0, 1.0], size=(n_features, 2))
    clean = mix @ np.vstack([pulse, resp])
    power = np.mean(clean ** 2, axis=1, keepdims=True)
    noise = rng.standard_normal(clean.shape) \
        * np.sqrt(power / 10.0 ** (snr_db / 10.0))
    offsets = rng.uniform(50.0, 300.0, size=(n_features, 1))
    return FeatureTrajectories(clean + noise + offsets, fps, "raw")


def synthetic_ecg(seed: int, pulse_hz: float, duration: float = 60.0,
                  sample_rate: float = 250.0,
                  noise: float = 0.05) -> np.ndarray:
    """Spike train at the beat rate over baseline noise."""
    rng = np.random.default_rng(seed + 91000)
    n = int(duration * sample_rate)
    ecg = noise * rng.standard_normal(n)
    spike = np.exp(-0.5 * ((np.arange(13) - 6) / 2.0) ** 2)
    for bt in np.arange(0.4, duration - 0.1, 1.0 / pulse_hz):
        i = int(round(bt * sample_rate))
        m = min(len(spike), n - i)
        ecg[i:i + m] += spike[:m]
    return ecg


# beat rates whose anchor-window phases average constructively; see the
# pattern-extraction stage for why template quality depends on this
DATASET_RATES = {"s1": 1.15, "s2": 1.2, "s3": 1.3}


def build_dataset(root, subjects=("s1", "s2", "s3"),
                  conditions=("normal", "activity"), duration: float = 60.0,
                  n_features: int = 40) -> None:
    """Write a <subject>/<condition>/{trajectories.csv,ecg.txt} tree."""
    for si, subject in enumerate(subjects):
        hz = DATASET_RATES.get(subject, 1.2)
        for ci, condition in enumerate(conditions):
            seed = 1000 * si + ci
            d = root / subject / condition
            d.mkdir(parents=True, exist_ok=True)
            traj = synthetic_trajectories(seed, n_features=n_features,
                                          duration=duration, pulse_hz=hz)
            write_trajectories(traj, d / "trajectories.csv")
            ecg = synthetic_ecg(seed, hz, duration=duration)
            with open(d / "ecg.txt", "w", encoding="utf-8") as fh:
                for v in ecg:
                    fh.write(f"{v:.6f}\n")


def uniform_mixture(seed: int, k: int, t: int, max_cond: float = 10.0):
    """(mixed data, mixing matrix) for k independent uniform sources."""
    rng = np.random.default_rng(seed)
    sources = rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=(k, t))
    while True:
        mixing = rng.standard_normal((k, k))
        if np.linalg.cond(mixing) <= max_cond:
            return mixing @ sources, mixing


def tracker_like_matrix(seed: int, n_features: int = 200, n_samples: int = 5000,
                        sample_rate: float = 250.0) -> np.ndarray:
    """Band-passed mixture of five non-Gaussian sources with an unstable
    onset burst, shaped like real filtered tracker output. Used by the
    extraction-timing comparison."""
    from scipy import signal as sg
    rng = np.random.default_rng(seed)
    t = np.arange(n_samples) / sample_rate
    sources = np.vstack([
        rng.uniform(-1.0, 1.0, n_samples),
        np.sign(rng.standard_normal(n_samples)),
        rng.laplace(size=n_samples),
        rng.uniform(-1.0, 1.0, n_samples) ** 3,
        np.sin(2.0 * np.pi * 1.2 * t + rng.uniform(0.0, 2.0 * np.pi)),
    ])
    mixing = rng.standard_normal((n_features, sources.shape[0]))
    x = mixing @ sources + 0.5 * rng.standard_normal((n_features, n_samples))
    burst = np.ones(n_samples)
    burst[:n_samples // 10] = 5.0
    x *= burst[None, :]
    sos = sg.butter(5, [0.75, 5.0], btype="bandpass", fs=sample_rate,
                    output="sos")
    return sg.sosfiltfilt(sos, x, axis=1)
