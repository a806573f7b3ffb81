"""Core EEG domain types: recordings and seizure annotations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Recording:
    """Multichannel EEG segment, samples in microvolts.

    ``samples`` is a (n_channels, n_samples) float64 matrix; every channel
    has the same length and the same sampling rate ``fs``.
    """

    channel_labels: list[str]
    fs: float
    samples: np.ndarray

    def __post_init__(self):
        if self.fs <= 0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        if self.samples.ndim != 2:
            raise ValueError("samples must be a 2D (channels, time) matrix")
        if len(self.channel_labels) != self.samples.shape[0]:
            raise ValueError(
                f"{len(self.channel_labels)} labels for "
                f"{self.samples.shape[0]} channels"
            )

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        """Recording length in seconds."""
        return self.samples.shape[1] / self.fs


@dataclass(frozen=True, order=True)
class SeizureAnnotation:
    """One seizure's position on a timeline, in seconds."""

    seizure_index: int
    onset: float
    end: float

    def __post_init__(self):
        if self.onset < 0 or self.end <= self.onset:
            raise ValueError(
                f"seizure {self.seizure_index}: need end > onset >= 0, "
                f"got [{self.onset}, {self.end}]"
            )


def validate_annotations(annotations: list[SeizureAnnotation]) -> None:
    """Check that annotations are sorted by onset and non-overlapping."""
    for prev, cur in zip(annotations, annotations[1:]):
        if cur.onset < prev.end:
            raise ValueError(
                f"seizures {prev.seizure_index} and {cur.seizure_index} "
                "overlap or are out of order"
            )
