"""Transform and band-power contracts, checked against naive oracles."""

import numpy as np
import pytest

from oracles import naive_dft_onesided, sinusoid_band_power, time_domain_energy
from vigil.dsp import (
    ALPHA,
    BETA,
    THETA,
    Band,
    BandAboveNyquist,
    RecordTooShort,
    TooShort,
    WindowPlan,
    band_power,
    fft_real,
    segment_windows,
)
from vigil.signal_io import SynthComponent, SynthSpec, generate_synthetic_eeg


def sinusoid(freq, duration, rate, amp=1.0, phase=0.0):
    t = np.arange(int(round(duration * rate))) / rate
    return amp * np.sin(2 * np.pi * freq * t + phase)


class TestFftReal:
    def test_impulse_flat_spectrum(self):
        spec = fft_real([1.0, 0.0, 0.0, 0.0])
        assert np.allclose(np.abs(spec.bins), 1.0)

    def test_constant_all_energy_in_dc(self):
        spec = fft_real([3.0] * 16)
        assert abs(spec.bins[0]) == pytest.approx(48.0)
        assert np.allclose(np.abs(spec.bins[1:]), 0.0, atol=1e-12)

    def test_matches_naive_dft_length_64(self):
        rng = np.random.default_rng(64)
        x = rng.normal(size=64)
        got = fft_real(x).bins
        want = naive_dft_onesided(x)
        assert np.allclose(got, want, rtol=1e-9, atol=1e-9)

    def test_matches_naive_dft_all_lengths_2_to_128(self):
        rng = np.random.default_rng(1)
        for n in range(2, 129):
            x = rng.normal(size=n)
            got = fft_real(x).bins
            want = naive_dft_onesided(x)
            scale = np.abs(want).max()
            assert np.allclose(got, want, atol=1e-9 * max(scale, 1.0)), f"n={n}"

    def test_parseval_random_lengths(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            n = int(rng.integers(16, 4097))
            x = rng.normal(size=n)
            energy = time_domain_energy(x)
            assert fft_real(x).energy() == pytest.approx(energy, rel=1e-9)

    def test_too_short(self):
        with pytest.raises(TooShort):
            fft_real([1.0])

    def test_bin_width(self):
        spec = fft_real(np.zeros(256), sample_rate=128.0)
        assert spec.bin_width == pytest.approx(0.5)
        assert len(spec.bins) == 129
        assert spec.n == 256


class TestBandPower:
    def test_alpha_sinusoid_exact(self):
        x = sinusoid(10.0, 20.0, 128.0)
        assert band_power(x, 128.0, ALPHA) == pytest.approx(0.5, abs=1e-6)
        assert band_power(x, 128.0, THETA) < 1e-9
        assert band_power(x, 128.0, BETA) < 1e-9

    def test_zero_signal(self):
        x = np.zeros(2560)
        for band in (THETA, ALPHA, BETA):
            assert band_power(x, 128.0, band) == 0.0

    def test_superposition_splits_theta_beta(self):
        x = sinusoid(5.0, 20.0, 128.0) + sinusoid(20.0, 20.0, 128.0)
        assert band_power(x, 128.0, THETA) == pytest.approx(0.5, abs=1e-6)
        assert band_power(x, 128.0, BETA) == pytest.approx(0.5, abs=1e-6)
        assert band_power(x, 128.0, ALPHA) < 1e-9

    def test_oracle_closed_form(self):
        assert sinusoid_band_power(1.0) == 0.5
        x = sinusoid(9.0, 20.0, 128.0, amp=2.5)
        assert band_power(x, 128.0, ALPHA) == pytest.approx(
            sinusoid_band_power(2.5), rel=1e-9
        )

    def test_band_above_nyquist(self):
        with pytest.raises(BandAboveNyquist):
            band_power(np.zeros(64), 32.0, BETA)

    def test_half_open_edges(self):
        # 13 Hz belongs to beta, not alpha; 8 Hz belongs to alpha.
        x13 = sinusoid(13.0, 20.0, 128.0)
        assert band_power(x13, 128.0, BETA) == pytest.approx(0.5, abs=1e-6)
        assert band_power(x13, 128.0, ALPHA) < 1e-9
        x8 = sinusoid(8.0, 20.0, 128.0)
        assert band_power(x8, 128.0, ALPHA) == pytest.approx(0.5, abs=1e-6)
        assert band_power(x8, 128.0, THETA) < 1e-9

    def test_dc_offset_ignored(self):
        x = sinusoid(10.0, 20.0, 128.0) + 500.0
        assert band_power(x, 128.0, ALPHA) == pytest.approx(0.5, abs=1e-6)

    def test_scaling_is_quadratic(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            x = rng.normal(size=int(rng.integers(64, 1025)))
            c = float(rng.uniform(0.1, 10.0))
            base = band_power(x, 128.0, ALPHA)
            scaled = band_power(c * x, 128.0, ALPHA)
            assert scaled == pytest.approx(c * c * base, rel=1e-9)

    def test_circular_shift_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            x = rng.normal(size=512)
            shift = int(rng.integers(1, 511))
            for band in (THETA, ALPHA, BETA):
                assert band_power(np.roll(x, shift), 128.0, band) == pytest.approx(
                    band_power(x, 128.0, band), rel=1e-9, abs=1e-15
                )

    def test_hann_taper_recovers_sinusoid_power(self):
        x = sinusoid(10.0, 20.0, 128.0)
        assert band_power(x, 128.0, ALPHA, taper="hann") == pytest.approx(0.5, rel=1e-3)


class TestBandType:
    def test_canonical_edges(self):
        assert (THETA.lo, THETA.hi) == (4.0, 7.0)
        assert (ALPHA.lo, ALPHA.hi) == (8.0, 13.0)
        assert (BETA.lo, BETA.hi) == (13.0, 30.0)

    def test_rejects_bad_edges(self):
        with pytest.raises(ValueError):
            Band("X", 10.0, 10.0)
        with pytest.raises(ValueError):
            Band("X", -1.0, 5.0)


class TestSegmentWindows:
    def test_sixty_seconds_three_windows(self):
        rec = generate_synthetic_eeg(SynthSpec(duration=60.0, noise_std=1.0), seed=6)
        wins = segment_windows(rec)
        assert [w.window_start for w in wins] == [0.0, 20.0, 40.0]

    def test_trailing_partial_dropped(self):
        rec = generate_synthetic_eeg(SynthSpec(duration=59.0, noise_std=1.0), seed=6)
        assert len(segment_windows(rec)) == 2

    def test_too_short(self):
        rec = generate_synthetic_eeg(SynthSpec(duration=10.0, noise_std=1.0), seed=6)
        with pytest.raises(RecordTooShort):
            segment_windows(rec)

    def test_channel_isolation(self):
        spec = SynthSpec(
            components=(SynthComponent("AF3", 10.0, 1.0),),
            noise_std=0.01, duration=60.0, sample_rate=128.0,
        )
        rec = generate_synthetic_eeg(spec, seed=8)
        for win in segment_windows(rec):
            assert win.powers["AF3"].alpha > 100 * win.powers["F7"].alpha

    def test_overlapping_hop(self):
        rec = generate_synthetic_eeg(SynthSpec(duration=40.0, noise_std=1.0), seed=6)
        wins = segment_windows(rec, WindowPlan(window_len=20.0, hop=10.0))
        assert [w.window_start for w in wins] == [0.0, 10.0, 20.0]

    def test_bad_plan(self):
        with pytest.raises(ValueError):
            WindowPlan(window_len=20.0, hop=0.0)
        with pytest.raises(ValueError):
            WindowPlan(window_len=20.0, hop=30.0)
