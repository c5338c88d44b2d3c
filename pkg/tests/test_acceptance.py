"""Acceptance gate: every criterion below prints one PASS/FAIL line
(run with ``pytest tests/test_acceptance.py -s -v``).

Paths: the synthetic generators live in tests/synthetic.py, the independent
oracles in tests/oracles.py. The published per-subject baseline used by the
RMSE criterion is the fixture tests/data/published_baseline.csv.
"""

import csv
import os
import statistics
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from oracles import amari_index, dtw_exhaustive, fft_amplitude
from pulsemotion import (BandPassSpec, FeatureTrajectories, PipelineConfig,
                         PulseMotionError, butterworth_bandpass,
                         dtw_distance, estimate_pulse, extract_components,
                         pulse_rate, rmse, run_benchmark, skewness,
                         ssa_decompose, ssa_reconstruct)
from pulsemotion.evaluate import write_report
from pulsemotion.pulse import PeakSet
from pulsemotion.published import PUBLISHED_RMSE_NOTE, published_columns
from synthetic import (build_dataset, synthetic_trajectories,
                       tracker_like_matrix, uniform_mixture)

DATA = Path(__file__).parent / "data"


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"\n[ACCEPTANCE] {name}: FAIL")
        raise
    print(f"\n[ACCEPTANCE] {name}: PASS")


def test_unmixing_quality_amari():
    """FastICA, JADE, SHIBBS each reach Amari < 0.05 on >= 95% of 100
    seeded 2-5 source mixtures (T'=5000, cond <= 10) in < 10 s total."""
    with criterion("unmixing quality (Amari < 0.05, >=95%, <10s)"):
        methods = ("fastica", "jade", "shibbs")
        hits = {m: 0 for m in methods}
        elapsed = 0.0
        n_trials = 100
        for trial in range(n_trials):
            k = 2 + trial % 4
            x, mixing = uniform_mixture(trial, k, 5000)
            for method in methods:
                t0 = time.perf_counter()
                cs = extract_components(x, method, k, seed=trial)
                elapsed += time.perf_counter() - t0
                if amari_index(cs.unmixing @ mixing) < 0.05:
                    hits[method] += 1
        for method in methods:
            assert hits[method] >= 95, (method, hits)
        assert elapsed < 10.0, f"extraction took {elapsed:.2f}s"


def test_dtw_matches_exhaustive_enumeration():
    """dtw_distance equals exhaustive path enumeration on 200 fixed random
    short pairs (lengths <= 6)."""
    with criterion("DTW oracle equivalence (200 pairs, exact)"):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            a = rng.uniform(-5, 5, size=int(rng.integers(1, 7)))
            b = rng.uniform(-5, 5, size=int(rng.integers(1, 7)))
            assert dtw_distance(a, b) == dtw_exhaustive(a, b)


def test_ssa_completeness_and_additivity():
    """Full-group reconstruction error < 1e-9 relative and disjoint-group
    additivity < 1e-9 on 50 random series (N=500, L=100)."""
    with criterion("SSA completeness (50 series, <1e-9)"):
        rng = np.random.default_rng(7)
        for _ in range(50):
            x = rng.standard_normal(500)
            dec = ssa_decompose(x, 100)
            full = ssa_reconstruct(dec, range(dec.n_triples))
            rel = np.max(np.abs(full - x)) / np.max(np.abs(x))
            assert rel < 1e-9
            g1 = ssa_reconstruct(dec, range(0, 3))
            g2 = ssa_reconstruct(dec, range(3, 7))
            g12 = ssa_reconstruct(dec, range(0, 7))
            assert np.max(np.abs(g1 + g2 - g12)) < 1e-9


def test_filter_contract():
    """5th-order 0.75-5 Hz band-pass at 250 Hz: 1.5 Hz passes at >= 0.95
    amplitude, 0.1 Hz attenuated by > 20 dB (FFT oracle)."""
    with criterion("filter contract (pass 1.5 Hz, stop 0.1 Hz)"):
        spec = BandPassSpec(0.75, 5.0, 5)
        t = np.arange(60 * 250) / 250.0
        for freq, check in ((1.5, lambda a: 0.95 <= a <= 1.0001),
                            (0.1, lambda a: a < 0.1)):
            x = np.sin(2 * np.pi * freq * t)
            traj = FeatureTrajectories(x[None, :], 250.0, "stable")
            out = butterworth_bandpass(traj, spec)
            assert check(fft_amplitude(out.data[0], freq, 250.0)), freq


def test_end_to_end_synthetic_recovery():
    """40-feature mixtures of a 1.2 Hz pulse + 0.3 Hz respiration + noise
    at 10 dB SNR: JADE recovers 72 +- 3 bpm on >= 9 of 10 seeds, < 30 s
    per run."""
    with criterion("end-to-end synthetic recovery (72 +- 3, >=9/10)"):
        cfg = PipelineConfig()
        hits = 0
        for seed in range(10):
            traj = synthetic_trajectories(seed)
            t0 = time.perf_counter()
            try:
                est = estimate_pulse(traj, "jade", cfg)
                if abs(est.bpm - 72.0) <= 3.0:
                    hits += 1
            except PulseMotionError:
                pass
            assert time.perf_counter() - t0 < 30.0
        assert hits >= 9, f"{hits}/10 within 72 +- 3"


def test_unit_truth_of_rate_formulas():
    """skewness([1,2,6]) is exactly 6; a 1 Hz peak train reads exactly
    60 bpm."""
    with criterion("unit truth (skewness 6.0, 1 Hz -> 60.0)"):
        assert skewness([1.0, 2.0, 6.0]) == 6.0
        peaks = PeakSet(np.arange(0, 11) * 250, 0.0)
        assert pulse_rate(peaks, 250.0).bpm == 60.0


def test_extraction_timing_ordering():
    """On a 200x5000 filtered feature matrix: median extraction times give
    JADE < FastICA, JADE < SHIBBS, and SHIBBS/JADE > 5."""
    with criterion("extraction timing ordering (SHIBBS/JADE > 5)"):
        x = tracker_like_matrix(5)
        methods = ("jade", "fastica", "shibbs")
        for method in methods:
            extract_components(x, method, 5, seed=0)  # warm-up
        times = {m: [] for m in methods}
        for _ in range(7):  # interleaved so load drift hits all methods alike
            for method in methods:
                t0 = time.perf_counter()
                extract_components(x, method, 5, seed=0)
                times[method].append(time.perf_counter() - t0)
        t_jade = statistics.median(times["jade"])
        t_fastica = statistics.median(times["fastica"])
        t_shibbs = statistics.median(times["shibbs"])
        print(f"\n  jade={t_jade * 1e3:.1f}ms fastica={t_fastica * 1e3:.1f}ms "
              f"shibbs={t_shibbs * 1e3:.1f}ms ratio={t_shibbs / t_jade:.1f}")
        assert t_jade < t_fastica
        assert t_jade < t_shibbs
        assert t_shibbs / t_jade > 5.0


def test_published_rmse_documented(tmp_path):
    """Standard RMSE over the published per-subject JADE-vs-GT values
    (rest condition) evaluates to ~8.0, and emitted reports carry the note
    about the divergence from the published 2.07 aggregate."""
    with criterion("published RMSE ~8.0 and divergence note"):
        with open(DATA / "published_baseline.csv", newline="") as fh:
            rows = [r for r in csv.DictReader(fh) if r["condition"] == "normal"]
        est = [float(r["jade"]) for r in rows]
        gt = [float(r["gt"]) for r in rows]
        assert len(est) == 15
        value = rmse(est, gt)
        assert abs(value - 8.0) <= 0.1, value
        # the in-package transcription matches the fixture
        lib_est, lib_gt = published_columns("jade", "normal")
        assert lib_est == est and lib_gt == gt
        # reports note the divergence from the published aggregate (2.07)
        assert "2.07" in PUBLISHED_RMSE_NOTE
        from pulsemotion.evaluate import EvaluationReport
        write_report(EvaluationReport(rows=[], timing={}), tmp_path)
        assert PUBLISHED_RMSE_NOTE in (tmp_path / "rmse.csv").read_text()


@pytest.mark.skipif(not os.environ.get("PULSEMOTION_DATASET"),
                    reason="published dataset not available "
                           "(set PULSEMOTION_DATASET to its root)")
def test_dataset_smoke():
    """Optional, dataset-gated: evaluate completes on all 30 recordings
    with >= 26 successful estimates and finite per-method RMSE."""
    with criterion("published dataset smoke (>=26 successes)"):
        report = run_benchmark(os.environ["PULSEMOTION_DATASET"])
        assert len(report.rows) == 30 * 4
        recordings_ok = len({(r.subject, r.condition) for r in report.rows
                             if r.failure is None})
        assert recordings_ok >= 26, recordings_ok
        for (method, condition), value in report.rmse_table().items():
            assert np.isfinite(value), (method, condition)


def test_synthetic_dataset_rmse():
    """3-subject synthetic dataset with known beat rates: JADE RMSE <= 3
    bpm against the ECG-derived ground truth."""
    with criterion("synthetic dataset RMSE (JADE <= 3 bpm)"):
        import tempfile
        with tempfile.TemporaryDirectory() as tmp:
            root = Path(tmp)
            build_dataset(root)
            report = run_benchmark(root, methods=("jade",),
                                   cfg=PipelineConfig(), timing_runs=1)
            table = report.rmse_table()
            for condition in ("activity", "normal"):
                value = table[("jade", condition)]
                assert np.isfinite(value) and value <= 3.0, (condition, value)
