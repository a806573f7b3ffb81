"""Interval labeling and moving-window sampling.

A seizure is "leading" when enough seizure-free time precedes it; only
leading seizures get a preictal interval. Interictal time must keep a
safety distance from every seizure boundary. Both interval kinds are
half-open [start, end) in timeline seconds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ..errors import InvalidSpec
from ..ingest.types import SeizureAnnotation, validate_annotations

INTERICTAL_FOLD = -1


class Label(enum.IntEnum):
    INTERICTAL = 0
    PREICTAL = 1


@dataclass(frozen=True)
class TimingPolicy:
    """Timing rules for turning seizure annotations into labeled intervals.

    sop is the window before the horizon in which a predicted seizure is
    expected to occur; sph is the horizon itself, the alarm-to-onset lead
    time. The preictal interval for a seizure at onset t is
    [t - sph - sop, t - sph).
    """

    sop: float = 1800.0
    sph: float = 300.0
    interictal_gap: float = 14400.0
    leading_gap: float = 14400.0
    window_len: float = 30.0
    overlap: float = 8.0

    def __post_init__(self) -> None:
        if self.sop <= 0:
            raise InvalidSpec(f"sop must be positive, got {self.sop}")
        if self.sph < 0:
            raise InvalidSpec(f"sph must be non-negative, got {self.sph}")
        if self.interictal_gap < 0:
            raise InvalidSpec("interictal_gap must be non-negative")
        if self.leading_gap < 0:
            raise InvalidSpec("leading_gap must be non-negative")
        if self.window_len <= 0:
            raise InvalidSpec("window_len must be positive")
        if not 0 <= self.overlap < self.window_len:
            raise InvalidSpec(
                f"overlap must lie in [0, window_len), got {self.overlap}"
            )

    @property
    def stride(self) -> float:
        return self.window_len - self.overlap


@dataclass(frozen=True)
class LabeledInterval:
    """Half-open span of timeline seconds carrying a class label.

    Preictal intervals remember the seizure they precede via
    source_seizure; interictal intervals have source_seizure None.
    """

    start: float
    end: float
    label: Label
    source_seizure: int | None = None

    def __post_init__(self) -> None:
        if not self.end > self.start:
            raise InvalidSpec(
                f"interval end must exceed start, got [{self.start}, {self.end})"
            )
        if self.label is Label.PREICTAL and self.source_seizure is None:
            raise InvalidSpec("preictal intervals must name their seizure")

    @property
    def duration(self) -> float:
        return self.end - self.start


def select_leading_seizures(
    annotations: list[SeizureAnnotation], min_gap: float
) -> list[int]:
    """Indices of seizures preceded by at least min_gap seizure-free seconds.

    The first seizure is always leading. A later seizure is leading when
    its onset is at least min_gap after the previous seizure's end; a gap
    of exactly min_gap counts.
    """
    validate_annotations(annotations)
    leading: list[int] = []
    for i, ann in enumerate(annotations):
        if i == 0 or ann.onset - annotations[i - 1].end >= min_gap:
            leading.append(i)
    return leading


def _subtract(base: list[tuple[float, float]], cut: tuple[float, float]) -> list[tuple[float, float]]:
    """Remove one half-open span from a disjoint sorted span list."""
    lo, hi = cut
    out: list[tuple[float, float]] = []
    for start, end in base:
        if hi <= start or lo >= end:
            out.append((start, end))
            continue
        if start < lo:
            out.append((start, lo))
        if hi < end:
            out.append((hi, end))
    return out


def label_intervals(
    annotations: list[SeizureAnnotation],
    leading: list[int],
    policy: TimingPolicy,
    timeline_end: float,
) -> tuple[list[LabeledInterval], list[int]]:
    """Build preictal and interictal intervals for one subject timeline.

    Each leading seizure at onset t contributes the preictal interval
    [t - sph - sop, t - sph), clipped to recorded time and truncated at
    the end of any earlier seizure. Interictal time is the recorded
    complement of [onset - interictal_gap, end + interictal_gap) around
    every seizure, minus any preictal time.

    Args:
        annotations: sorted, non-overlapping seizures on the timeline.
        leading: indices into annotations eligible for preictal intervals.
        policy: timing rules.
        timeline_end: recorded duration in seconds.

    Returns:
        (intervals, empty_preictal) where intervals mixes both labels
        sorted by start, and empty_preictal lists leading seizure indices
        whose preictal interval was clipped to nothing. Those seizures are
        reported rather than raising so callers can drop the fold.
    """
    validate_annotations(annotations)
    if timeline_end <= 0:
        raise InvalidSpec("timeline_end must be positive")
    for idx in leading:
        if not 0 <= idx < len(annotations):
            raise InvalidSpec(f"leading index {idx} out of range")

    intervals: list[LabeledInterval] = []
    empty_preictal: list[int] = []
    preictal_spans: list[tuple[float, float]] = []
    for idx in sorted(leading):
        onset = annotations[idx].onset
        start = onset - policy.sph - policy.sop
        end = onset - policy.sph
        start = max(start, 0.0)
        end = min(end, timeline_end)
        for earlier in annotations[:idx]:
            start = max(start, earlier.end)
        if end - start <= 0:
            empty_preictal.append(idx)
            continue
        preictal_spans.append((start, end))
        intervals.append(LabeledInterval(start, end, Label.PREICTAL, idx))

    free: list[tuple[float, float]] = [(0.0, timeline_end)]
    for ann in annotations:
        free = _subtract(
            free,
            (ann.onset - policy.interictal_gap, ann.end + policy.interictal_gap),
        )
    for span in preictal_spans:
        free = _subtract(free, span)
    for start, end in free:
        intervals.append(LabeledInterval(start, end, Label.INTERICTAL))

    intervals.sort(key=lambda iv: (iv.start, iv.label))
    return intervals, empty_preictal


def slide_windows(
    interval: LabeledInterval, policy: TimingPolicy, fs: float
) -> list[float]:
    """Start times (seconds) of fixed-length windows tiling an interval.

    Windows are window_len seconds long and advance by
    window_len - overlap; only windows lying fully inside the interval
    are kept, so intervals shorter than window_len yield an empty list.
    Arithmetic runs on the integer sample grid at rate fs, which keeps
    window starts exactly stride samples apart regardless of how the
    interval bounds round.
    """
    if fs <= 0:
        raise InvalidSpec(f"fs must be positive, got {fs}")
    n_window = int(round(policy.window_len * fs))
    n_stride = int(round(policy.stride * fs))
    if n_window < 1 or n_stride < 1:
        raise InvalidSpec("window and stride must span at least one sample")
    first = math.ceil(interval.start * fs - 1e-6)
    stop = math.floor(interval.end * fs + 1e-6)
    n_fit = stop - first - n_window
    if n_fit < 0:
        return []
    count = n_fit // n_stride + 1
    return [(first + k * n_stride) / fs for k in range(count)]
