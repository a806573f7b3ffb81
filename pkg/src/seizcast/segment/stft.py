"""Short-time Fourier featurization of raw EEG windows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidSpec, WindowTooShort


@dataclass(frozen=True)
class StftConfig:
    """STFT parameters producing the (channels, frequency, time) tensor.

    bins_kept is an inclusive bin index range; the default (1, 128)
    drops the DC bin and keeps everything up to Nyquist for n_fft 256.
    magnitude maps each magnitude value: "log1p" applies ln(1 + x),
    "linear" leaves it unchanged.
    """

    n_fft: int = 256
    hop: int = 128
    window: str = "hann"
    bins_kept: tuple[int, int] = (1, 128)
    magnitude: str = "log1p"

    def __post_init__(self) -> None:
        if self.n_fft < 2:
            raise InvalidSpec(f"n_fft must be at least 2, got {self.n_fft}")
        if not 0 < self.hop <= self.n_fft:
            raise InvalidSpec(f"hop must lie in (0, n_fft], got {self.hop}")
        if self.window != "hann":
            raise InvalidSpec(f"unsupported analysis window {self.window!r}")
        lo, hi = self.bins_kept
        if not 0 <= lo <= hi <= self.n_fft // 2:
            raise InvalidSpec(
                f"bins_kept must satisfy 0 <= lo <= hi <= n_fft/2, got {self.bins_kept}"
            )
        if self.magnitude not in ("log1p", "linear"):
            raise InvalidSpec(f"unsupported magnitude transform {self.magnitude!r}")

    @property
    def n_bins(self) -> int:
        lo, hi = self.bins_kept
        return hi - lo + 1

    def n_frames(self, n_samples: int) -> int:
        if n_samples < self.n_fft:
            raise WindowTooShort(
                f"window of {n_samples} samples is shorter than n_fft={self.n_fft}"
            )
        return 1 + (n_samples - self.n_fft) // self.hop

    def tensor_shape(self, n_channels: int, n_samples: int) -> tuple[int, int, int]:
        return (n_channels, self.n_bins, self.n_frames(n_samples))


def hann_window(n: int) -> np.ndarray:
    """Periodic Hann window: 0.5 - 0.5 cos(2 pi k / n)."""
    k = np.arange(n, dtype=np.float64)
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * k / n)


def stft_featurize(window: np.ndarray, cfg: StftConfig) -> np.ndarray:
    """Transform a raw multichannel window into a spectral tensor.

    Args:
        window: array of shape (n_channels, n_samples), samples in
            physical units.
        cfg: STFT parameters.

    Returns:
        float64 array of shape (n_channels, cfg.n_bins, n_frames) with
        axis order (channels, frequency, time). Frame t covers samples
        [t * hop, t * hop + n_fft); trailing samples that do not fill a
        frame are dropped. Callers that persist tensors (the dataset
        cache) narrow to float32 at storage time.

    Raises:
        WindowTooShort: fewer samples than one analysis frame.
    """
    window = np.asarray(window, dtype=np.float64)
    if window.ndim != 2:
        raise InvalidSpec(f"expected (channels, samples) array, got ndim={window.ndim}")
    n_channels, n_samples = window.shape
    n_frames = cfg.n_frames(n_samples)

    taper = hann_window(cfg.n_fft)
    offsets = np.arange(n_frames) * cfg.hop
    # (C, frames, n_fft) frame stack via gather; copies, but windows are small
    idx = offsets[:, None] + np.arange(cfg.n_fft)[None, :]
    frames = window[:, idx] * taper
    spectrum = np.fft.rfft(frames, n=cfg.n_fft, axis=2)
    lo, hi = cfg.bins_kept
    mag = np.abs(spectrum[:, :, lo : hi + 1])
    if cfg.magnitude == "log1p":
        mag = np.log1p(mag)
    # (C, frames, bins) -> (C, bins, frames)
    return np.ascontiguousarray(mag.transpose(0, 2, 1))
