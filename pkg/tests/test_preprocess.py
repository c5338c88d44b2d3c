import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import fft_amplitude, natural_spline_dense
from pulsemotion import (BandPassSpec, DataError, FeatureTrajectories,
                         butterworth_bandpass, cubic_spline_resample,
                         remove_unstable_features)
from pulsemotion.preprocess import max_consecutive_displacement


def raw(rows, fps=25.0):
    return FeatureTrajectories(np.asarray(rows, float), fps, "raw")


class TestSplineResample:
    def test_linear_row_reproduced(self):
        out = cubic_spline_resample(raw([[0.0, 1.0, 2.0]]), 10)
        assert out.data.shape == (1, 21)
        assert out.sample_rate == 250.0
        assert out.origin == "interpolated"
        np.testing.assert_allclose(out.data[0], np.arange(21) * 0.1, atol=1e-12)

    def test_factor_one_is_identity(self, rng):
        traj = raw(rng.standard_normal((3, 10)))
        out = cubic_spline_resample(traj, 1)
        assert np.array_equal(out.data, traj.data)
        assert out.origin == "interpolated"
        assert out.sample_rate == traj.sample_rate

    def test_cubic_against_dense_solve(self):
        y = np.arange(5.0) ** 3
        out = cubic_spline_resample(raw([y]), 4)
        expected = natural_spline_dense(y, 4)
        np.testing.assert_allclose(out.data[0], expected, atol=1e-9)

    def test_random_rows_against_dense_solve(self, rng):
        rows = rng.standard_normal((4, 17))
        out = cubic_spline_resample(raw(rows), 10)
        for i in range(4):
            np.testing.assert_allclose(out.data[i],
                                       natural_spline_dense(rows[i], 10),
                                       atol=1e-9)

    def test_endpoints_and_knots_exact(self, rng):
        rows = rng.standard_normal((2, 12))
        out = cubic_spline_resample(raw(rows), 10)
        assert np.array_equal(out.data[:, ::10], rows)

    def test_too_short_rejected(self):
        with pytest.raises(DataError):
            cubic_spline_resample(raw([[0.0, 1.0]]), 10)

    def test_wrong_origin_rejected(self, rng):
        traj = FeatureTrajectories(rng.standard_normal((2, 10)), 25.0,
                                   "interpolated")
        with pytest.raises(DataError):
            cubic_spline_resample(traj, 10)


class TestRemoveUnstable:
    def interp(self, rows):
        return FeatureTrajectories(np.asarray(rows, float), 250.0,
                                   "interpolated")

    def test_constant_features_all_retained(self):
        traj = self.interp(np.ones((4, 20)))
        out = remove_unstable_features(traj)
        assert out.n_features == 4
        assert out.origin == "stable"

    def test_mode_histogram_example(self):
        # rounded maxima {1,1,1,2,3}: mode 1, keep the three 1-px features
        rows = np.zeros((5, 10))
        for i, step in enumerate([1.0, 1.1, 0.9, 2.0, 3.0]):
            rows[i, 5] = step
        traj = self.interp(rows)
        assert list(max_consecutive_displacement(rows)) == [1, 1, 1, 2, 3]
        out = remove_unstable_features(traj)
        assert out.n_features == 3

    def test_single_feature_retained(self):
        rows = np.zeros((1, 10))
        rows[0, 3] = 7.0
        assert remove_unstable_features(self.interp(rows)).n_features == 1

    def test_mode_tie_takes_smallest(self):
        # {0,0,1,1}: tie -> mode 0, only the quiet features stay
        rows = np.zeros((4, 10))
        rows[2, 4] = 1.0
        rows[3, 4] = 1.0
        out = remove_unstable_features(self.interp(rows))
        assert out.n_features == 2

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(min_value=0, max_value=6),
                    min_size=1, max_size=12))
    def test_idempotent(self, maxima):
        rows = np.zeros((len(maxima), 8))
        for i, m in enumerate(maxima):
            rows[i, 3] = float(m)
        out1 = remove_unstable_features(self.interp(rows))
        out2 = remove_unstable_features(
            FeatureTrajectories(out1.data, 250.0, "interpolated"))
        assert np.array_equal(out1.data, out2.data)

    def test_subset_of_input(self, rng):
        rows = np.cumsum(rng.standard_normal((10, 50)), axis=1)
        out = remove_unstable_features(self.interp(rows))
        found = sum(1 for r in out.data
                    if any(np.array_equal(r, s) for s in rows))
        assert found == out.n_features >= 1


class TestButterworth:
    def stable(self, rows, fs):
        return FeatureTrajectories(np.asarray(rows, float), fs, "stable")

    def test_zero_in_zero_out(self):
        out = butterworth_bandpass(self.stable(np.zeros((2, 1000)), 250.0),
                                   BandPassSpec())
        assert np.allclose(out.data, 0.0)
        assert out.origin == "filtered"

    def test_passband_amplitude(self):
        t = np.arange(30 * 250) / 250.0
        x = np.sin(2 * np.pi * 1.5 * t)
        out = butterworth_bandpass(self.stable([x], 250.0), BandPassSpec())
        amp = fft_amplitude(out.data[0], 1.5, 250.0)
        assert 0.95 <= amp <= 1.0001

    def test_stopband_attenuation(self):
        t = np.arange(60 * 250) / 250.0
        x = np.sin(2 * np.pi * 0.1 * t)
        out = butterworth_bandpass(self.stable([x], 250.0), BandPassSpec())
        amp = fft_amplitude(out.data[0], 0.1, 250.0)
        assert amp < 0.1  # > 20 dB down

    def test_linearity(self, rng):
        x = rng.standard_normal(2000)
        y = rng.standard_normal(2000)
        spec = BandPassSpec()
        fx = butterworth_bandpass(self.stable([x], 250.0), spec).data[0]
        fy = butterworth_bandpass(self.stable([y], 250.0), spec).data[0]
        fxy = butterworth_bandpass(self.stable([2.5 * x - 1.5 * y], 250.0),
                                   spec).data[0]
        np.testing.assert_allclose(fxy, 2.5 * fx - 1.5 * fy, rtol=1e-9,
                                   atol=1e-9)

    def test_zero_phase(self):
        # band-centered sine: input/output cross-correlation peaks at lag 0
        t = np.arange(20 * 250) / 250.0
        x = np.sin(2 * np.pi * 1.9 * t)
        out = butterworth_bandpass(self.stable([x], 250.0),
                                   BandPassSpec()).data[0]
        lags = range(-10, 11)
        xc = [np.dot(x[100:-100], np.roll(out, k)[100:-100]) for k in lags]
        assert lags[int(np.argmax(xc))] == 0

    def test_invalid_spec_rejected(self):
        with pytest.raises(DataError, match="Nyquist"):
            butterworth_bandpass(self.stable(np.zeros((1, 100)), 8.0),
                                 BandPassSpec(0.75, 5.0, 5))
