"""Spectrogram featurizer against an explicit DFT-matrix oracle."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seizcast.errors import InvalidSpec, WindowTooShort
from seizcast.segment.stft import StftConfig, hann_window, stft_featurize

from .oracles import dft_bin_scalar, hann_periodic, stft_magnitudes

FULL_BAND = StftConfig(bins_kept=(1, 128))


class TestConfig:
    def test_tensor_shape_for_30s_window(self):
        assert FULL_BAND.tensor_shape(n_channels=18, n_samples=30 * 256) == (18, 128, 59)

    def test_frames_formula(self):
        assert FULL_BAND.n_frames(256) == 1
        assert FULL_BAND.n_frames(256 + 128) == 2
        assert FULL_BAND.n_frames(7680) == 59

    def test_window_shorter_than_transform_rejected(self):
        with pytest.raises(WindowTooShort):
            FULL_BAND.n_frames(255)

    def test_bins_validation(self):
        with pytest.raises(InvalidSpec):
            StftConfig(bins_kept=(5, 2))
        with pytest.raises(InvalidSpec):
            StftConfig(bins_kept=(0, 200))


class TestWindowFunction:
    def test_matches_defining_formula(self):
        assert np.allclose(hann_window(256), hann_periodic(256), atol=1e-15)

    def test_periodic_not_symmetric(self):
        w = hann_window(8)
        assert w[0] == 0.0
        assert w[-1] != w[0]  # periodic form omits the trailing zero


class TestFeaturize:
    def test_matches_naive_dft(self):
        rng = np.random.default_rng(3)
        window = rng.standard_normal((2, 1024))
        got = stft_featurize(window, FULL_BAND)
        for c in range(2):
            raw = stft_magnitudes(window[c], 256, 128, 1, 128)
            want = np.log1p(raw).T  # (bins, frames)
            rel = np.abs(got[c] - want) / np.maximum(np.abs(want), 1e-12)
            assert rel.max() < 1e-8

    def test_single_bin_against_scalar_sum(self):
        rng = np.random.default_rng(4)
        window = rng.standard_normal((1, 256))
        got = stft_featurize(window, FULL_BAND)
        frame = window[0] * hann_periodic(256)
        mag = abs(dft_bin_scalar(frame, 17))
        assert got[0, 16, 0] == pytest.approx(np.log1p(mag), rel=1e-9)

    def test_pure_tone_concentrates_at_its_bin(self):
        fs, freq = 256.0, 10.0
        t = np.arange(30 * 256) / fs
        window = np.sin(2 * np.pi * freq * t)[None, :]
        tensor = stft_featurize(window, FULL_BAND)
        # bins_kept starts at bin 1, so bin k sits at row k-1
        assert np.all(tensor.argmax(axis=1) == int(freq) - 1)

    def test_output_dtype_and_shape(self):
        window = np.zeros((3, 7680))
        tensor = stft_featurize(window, FULL_BAND)
        assert tensor.dtype == np.float64
        assert tensor.shape == (3, 128, 59)

    def test_band_limited_config(self):
        cfg = StftConfig(bins_kept=(1, 64))
        tensor = stft_featurize(np.zeros((2, 7680)), cfg)
        assert tensor.shape == (2, 64, 59)

    def test_log_compression_nonnegative(self):
        rng = np.random.default_rng(5)
        tensor = stft_featurize(rng.standard_normal((2, 512)), FULL_BAND)
        assert np.all(tensor >= 0.0)
        assert np.all(np.isfinite(tensor))


@settings(max_examples=30, deadline=None)
@given(
    n_extra=st.integers(0, 6),
    n_channels=st.integers(1, 3),
    seed=st.integers(0, 100),
)
def test_frame_count_law(n_extra, n_channels, seed):
    rng = np.random.default_rng(seed)
    n_samples = 256 + 128 * n_extra
    window = rng.standard_normal((n_channels, n_samples))
    tensor = stft_featurize(window, FULL_BAND)
    assert tensor.shape == (n_channels, 128, 1 + n_extra)
