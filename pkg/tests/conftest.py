"""Shared fixtures: the default desk-scale dataset plus a faster tiny one."""

from __future__ import annotations

import pytest

from seizcast.config import parse_config
from seizcast.ingest.synthetic import SyntheticSpec, generate_synthetic_recording
from seizcast.ingest.timeline import from_recording
from seizcast.segment.dataset import build_dataset
from seizcast.segment.stft import StftConfig
from seizcast.segment.timing import TimingPolicy

# Small enough that a training fold finishes in about a second, yet it
# still has 3 leading seizures, both classes, and a separable signature.
TINY_SPEC = SyntheticSpec(
    n_channels=4,
    fs=256.0,
    n_seizures=3,
    seizure_duration=5.0,
    inter_seizure_gap=90.0,
    head=60.0,
    tail=60.0,
    sop=30.0,
    sph=5.0,
    signature_freq=18.0,
    signature_gain=3.0,
    noise_amplitude=15.0,
    seed=5,
)
TINY_POLICY = TimingPolicy(
    sop=30.0,
    sph=5.0,
    interictal_gap=35.0,
    leading_gap=50.0,
    window_len=6.0,
    overlap=2.0,
)
TINY_STFT = StftConfig(bins_kept=(1, 32))


@pytest.fixture(scope="session")
def default_cfg():
    return parse_config(None)


@pytest.fixture(scope="session")
def desk_dataset(default_cfg):
    from seizcast.cli import _load_timeline

    timeline = _load_timeline(default_cfg)
    return build_dataset(
        timeline, default_cfg.timing, default_cfg.stft, default_cfg.data.channels
    )


@pytest.fixture(scope="session")
def tiny_timeline():
    recording, annotations = generate_synthetic_recording(TINY_SPEC)
    return from_recording(recording, annotations, name="tiny.edf")


@pytest.fixture(scope="session")
def tiny_dataset(tiny_timeline):
    return build_dataset(tiny_timeline, TINY_POLICY, TINY_STFT)
