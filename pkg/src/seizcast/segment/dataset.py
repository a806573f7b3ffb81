"""Dataset assembly: labeled intervals -> windows -> spectral tensors.

The end product is a deterministic, sorted list of SpectralSample plus
enough metadata to rebuild splits. A flat float32 cache format keeps
preprocessing out of the training loop.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import InsufficientSeizures, ShapeMismatch, StaleCache
from ..ingest.timeline import SubjectTimeline, TimelineFile
from .stft import StftConfig, stft_featurize
from .timing import (
    INTERICTAL_FOLD,
    Label,
    LabeledInterval,
    TimingPolicy,
    label_intervals,
    select_leading_seizures,
    slide_windows,
)

CACHE_MANIFEST = "manifest.json"
CACHE_TENSORS = "samples.f32"
CACHE_VERSION = 1
MIN_FOLDS = 3


@dataclass(frozen=True)
class SpectralSample:
    """One labeled STFT tensor.

    fold_key is the seizure index of the leading seizure a preictal
    window precedes, or INTERICTAL_FOLD (-1) for interictal windows.
    origin is the timeline second at which the raw window starts.
    """

    tensor: np.ndarray
    label: Label
    fold_key: int
    origin: float

    def __post_init__(self) -> None:
        if self.tensor.ndim != 3:
            raise ShapeMismatch(f"sample tensor must be 3D, got {self.tensor.shape}")
        if self.tensor.dtype != np.float32:
            raise ShapeMismatch(f"sample tensor must be float32, got {self.tensor.dtype}")
        if self.label is Label.PREICTAL and self.fold_key < 0:
            raise ShapeMismatch("preictal samples need a seizure fold_key")
        if self.label is Label.INTERICTAL and self.fold_key != INTERICTAL_FOLD:
            raise ShapeMismatch("interictal samples carry the interictal fold marker")


@dataclass
class Dataset:
    """Samples plus the shared geometry needed to split and train on them."""

    samples: list[SpectralSample]
    tensor_shape: tuple[int, int, int]
    fs: float
    channel_labels: list[str]
    fold_keys: list[int]
    excluded_seizures: list[int]
    policy: TimingPolicy
    stft: StftConfig

    @property
    def n_preictal(self) -> int:
        return sum(1 for s in self.samples if s.label is Label.PREICTAL)

    @property
    def n_interictal(self) -> int:
        return sum(1 for s in self.samples if s.label is Label.INTERICTAL)

    def by_label(self, label: Label) -> list[SpectralSample]:
        return [s for s in self.samples if s.label is label]


def _sort_key(sample: SpectralSample) -> tuple[int, int, float]:
    return (int(sample.label), sample.fold_key, sample.origin)


def _intersect(
    interval: LabeledInterval, span: tuple[float, float]
) -> LabeledInterval | None:
    start = max(interval.start, span[0])
    end = min(interval.end, span[1])
    if end - start <= 0:
        return None
    return LabeledInterval(start, end, interval.label, interval.source_seizure)


def build_dataset(
    timeline: SubjectTimeline,
    policy: TimingPolicy,
    cfg: StftConfig,
    channels: Sequence[str] | None = None,
) -> Dataset:
    """Featurize a subject timeline into labeled spectral samples.

    Windows never straddle file boundaries: labeled intervals are
    intersected with each recorded span before sampling, so time falling
    between files is simply dropped.

    Args:
        timeline: recorded files plus timeline-global seizure annotations.
        policy: timing rules (preictal geometry, gaps, window/stride).
        cfg: STFT parameters.
        channels: channel labels to keep, in order; None keeps each
            file's non-annotation channels as stored.

    Returns:
        Dataset with samples sorted by (label, fold_key, origin).

    Raises:
        InsufficientSeizures: fewer than 3 leading seizures with a
            non-empty preictal interval; cross-validation needs one
            held-out seizure plus at least two for training.
    """
    leading = select_leading_seizures(timeline.annotations, policy.leading_gap)
    intervals, excluded = label_intervals(
        timeline.annotations, leading, policy, timeline.recorded_end
    )
    fold_keys = [i for i in leading if i not in excluded]
    if len(fold_keys) < MIN_FOLDS:
        raise InsufficientSeizures(
            f"need at least {MIN_FOLDS} leading seizures with preictal data, "
            f"found {len(fold_keys)} (of {len(leading)} leading, "
            f"{len(timeline.annotations)} total)"
        )

    samples: list[SpectralSample] = []
    fs: float | None = None
    labels_used: list[str] | None = None
    shape: tuple[int, int, int] | None = None
    for file, recording in timeline.iter_recordings(channels):
        if fs is None:
            fs = recording.fs
            labels_used = list(recording.channel_labels)
        elif recording.fs != fs:
            raise ShapeMismatch(
                f"file {file.name} sampled at {recording.fs} Hz, expected {fs}"
            )
        elif list(recording.channel_labels) != labels_used:
            raise ShapeMismatch(f"file {file.name} has mismatched channels")
        n_window = int(round(policy.window_len * fs))
        span = (file.offset, file.end)
        for interval in intervals:
            piece = _intersect(interval, span)
            if piece is None:
                continue
            for start in slide_windows(piece, policy, fs):
                i0 = int(round((start - file.offset) * fs))
                raw = recording.samples[:, i0 : i0 + n_window]
                if raw.shape[1] != n_window:
                    raise ShapeMismatch(
                        f"window at t={start} overruns file {file.name}"
                    )
                tensor = stft_featurize(raw, cfg).astype(np.float32)
                if shape is None:
                    shape = tensor.shape
                elif tensor.shape != shape:
                    raise ShapeMismatch(
                        f"tensor shape {tensor.shape} deviates from {shape}"
                    )
                fold = (
                    interval.source_seizure
                    if interval.label is Label.PREICTAL
                    else INTERICTAL_FOLD
                )
                samples.append(SpectralSample(tensor, interval.label, fold, start))

    if shape is None or fs is None or labels_used is None:
        raise InsufficientSeizures("timeline produced no samples")
    samples.sort(key=_sort_key)
    return Dataset(
        samples=samples,
        tensor_shape=shape,
        fs=fs,
        channel_labels=labels_used,
        fold_keys=fold_keys,
        excluded_seizures=excluded,
        policy=policy,
        stft=cfg,
    )


def save_dataset(dataset: Dataset, directory: str | Path) -> None:
    """Write a dataset cache: JSON manifest plus flat float32 tensors.

    The binary file holds every sample tensor concatenated in manifest
    order as little-endian float32, so a reload is bit-identical.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "version": CACHE_VERSION,
        "tensor_shape": list(dataset.tensor_shape),
        "fs": dataset.fs,
        "channel_labels": dataset.channel_labels,
        "fold_keys": dataset.fold_keys,
        "excluded_seizures": dataset.excluded_seizures,
        "policy": asdict(dataset.policy),
        "stft": {
            **asdict(dataset.stft),
            "bins_kept": list(dataset.stft.bins_kept),
        },
        "counts": {
            "preictal": dataset.n_preictal,
            "interictal": dataset.n_interictal,
        },
        "samples": [
            {"label": int(s.label), "fold_key": s.fold_key, "origin": s.origin}
            for s in dataset.samples
        ],
    }
    block = np.stack([s.tensor for s in dataset.samples]).astype("<f4")
    tmp_bin = directory / (CACHE_TENSORS + ".tmp")
    block.tofile(tmp_bin)
    tmp_bin.replace(directory / CACHE_TENSORS)
    tmp_json = directory / (CACHE_MANIFEST + ".tmp")
    tmp_json.write_text(json.dumps(manifest, indent=2) + "\n")
    tmp_json.replace(directory / CACHE_MANIFEST)


def load_dataset(directory: str | Path) -> Dataset:
    """Load a dataset cache written by save_dataset.

    Raises:
        StaleCache: manifest and binary disagree (size or version), which
            usually means a partial write or mixed cache versions.
    """
    directory = Path(directory)
    manifest_path = directory / CACHE_MANIFEST
    tensors_path = directory / CACHE_TENSORS
    if not manifest_path.exists() or not tensors_path.exists():
        raise StaleCache(f"no dataset cache in {directory}")
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("version") != CACHE_VERSION:
        raise StaleCache(
            f"cache version {manifest.get('version')} != {CACHE_VERSION}"
        )
    shape = tuple(manifest["tensor_shape"])
    entries = manifest["samples"]
    expected = len(entries) * int(np.prod(shape)) * 4
    actual = tensors_path.stat().st_size
    if expected != actual:
        raise StaleCache(
            f"tensor file holds {actual} bytes, manifest implies {expected}"
        )
    block = np.fromfile(tensors_path, dtype="<f4").reshape(len(entries), *shape)
    samples = [
        SpectralSample(
            tensor=np.ascontiguousarray(block[i]),
            label=Label(entry["label"]),
            fold_key=entry["fold_key"],
            origin=entry["origin"],
        )
        for i, entry in enumerate(entries)
    ]
    stft_kwargs = dict(manifest["stft"])
    stft_kwargs["bins_kept"] = tuple(stft_kwargs["bins_kept"])
    return Dataset(
        samples=samples,
        tensor_shape=shape,
        fs=manifest["fs"],
        channel_labels=list(manifest["channel_labels"]),
        fold_keys=list(manifest["fold_keys"]),
        excluded_seizures=list(manifest["excluded_seizures"]),
        policy=TimingPolicy(**manifest["policy"]),
        stft=StftConfig(**stft_kwargs),
    )
