"""Labeled synthetic EEG generator for desk-scale experiments.

Produces Gaussian background noise with a narrowband sinusoid injected
into each seizure's preictal window, so the preictal/interictal classes
are separable by spectral magnitude at the signature frequency. Interval
durations are laid out directly in seconds; pairing the generator with a
matching desk-scale timing policy stands in for hours of clinical data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidSpec
from .types import Recording, SeizureAnnotation

# Ictal periods get a strong slow oscillation purely so plotted traces look
# sensible; ictal data is never sampled for training.
ICTAL_FREQ_HZ = 3.0
ICTAL_GAIN = 6.0


@dataclass(frozen=True)
class SyntheticSpec:
    """Layout and signal parameters for one synthetic recording.

    ``sop``/``sph`` position the injected signature window
    [onset - sph - sop, onset - sph) and should match the timing policy
    used downstream. ``inter_seizure_gap`` is the seizure-free stretch
    between one seizure's end and the next onset.
    """

    n_channels: int = 8
    fs: float = 256.0
    n_seizures: int = 3
    seizure_duration: float = 20.0
    inter_seizure_gap: float = 1200.0
    head: float = 900.0
    tail: float = 660.0
    sop: float = 300.0
    sph: float = 30.0
    signature_freq: float = 18.0
    signature_gain: float = 3.0
    noise_amplitude: float = 15.0
    seed: int = 7

    def __post_init__(self):
        if self.n_channels < 1:
            raise InvalidSpec("need at least one channel")
        if self.fs <= 0 or self.fs != int(self.fs):
            raise InvalidSpec(f"fs must be a positive integer, got {self.fs}")
        if self.n_seizures < 0:
            raise InvalidSpec("n_seizures must be >= 0")
        if min(self.seizure_duration, self.head, self.tail) < 0:
            raise InvalidSpec("durations must be non-negative")
        if self.noise_amplitude <= 0:
            raise InvalidSpec("noise_amplitude must be positive")
        if self.signature_freq <= 0 or self.signature_freq >= self.fs / 2:
            raise InvalidSpec(
                f"signature frequency {self.signature_freq} outside (0, fs/2)"
            )
        if self.n_seizures > 0:
            need = self.sop + self.sph
            if self.head < need:
                raise InvalidSpec(
                    f"head {self.head}s cannot hold a {need}s preictal window"
                )
            if self.n_seizures > 1 and self.inter_seizure_gap < need:
                raise InvalidSpec(
                    f"gap {self.inter_seizure_gap}s cannot hold a {need}s "
                    "preictal window"
                )

    @property
    def onsets(self) -> list[float]:
        step = self.seizure_duration + self.inter_seizure_gap
        return [self.head + i * step for i in range(self.n_seizures)]

    @property
    def total_duration(self) -> float:
        if self.n_seizures == 0:
            return self.head + self.tail
        return self.onsets[-1] + self.seizure_duration + self.tail


def generate_synthetic_recording(
    spec: SyntheticSpec,
) -> tuple[Recording, list[SeizureAnnotation]]:
    """Generate one recording plus its seizure annotations.

    Deterministic for a fixed seed: identical specs produce bit-identical
    sample matrices.
    """
    rng = np.random.default_rng(spec.seed)
    n_samples = round(spec.total_duration * spec.fs)
    samples = rng.normal(
        0.0, spec.noise_amplitude, size=(spec.n_channels, n_samples)
    )

    annotations = []
    for idx, onset in enumerate(spec.onsets):
        end = onset + spec.seizure_duration
        annotations.append(SeizureAnnotation(seizure_index=idx, onset=onset, end=end))

        phases = rng.uniform(0.0, 2.0 * np.pi, size=spec.n_channels)
        pre_lo = round((onset - spec.sph - spec.sop) * spec.fs)
        pre_hi = round((onset - spec.sph) * spec.fs)
        t = np.arange(pre_lo, pre_hi) / spec.fs
        amplitude = spec.signature_gain * spec.noise_amplitude
        samples[:, pre_lo:pre_hi] += amplitude * np.sin(
            2.0 * np.pi * spec.signature_freq * t[None, :] + phases[:, None]
        )

        ict_lo, ict_hi = round(onset * spec.fs), round(end * spec.fs)
        t = np.arange(ict_lo, ict_hi) / spec.fs
        samples[:, ict_lo:ict_hi] += (
            ICTAL_GAIN
            * spec.noise_amplitude
            * np.sin(2.0 * np.pi * ICTAL_FREQ_HZ * t[None, :] + phases[:, None])
        )

    labels = [f"SYN{c + 1}" for c in range(spec.n_channels)]
    return Recording(channel_labels=labels, fs=spec.fs, samples=samples), annotations
