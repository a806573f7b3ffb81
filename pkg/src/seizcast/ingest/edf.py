"""EDF (1992 base format) reader and writer.

Parses the fixed ASCII header layout directly and decodes 16-bit
little-endian samples; no third-party EDF library involved. Only
continuous recordings with integer-second records are supported. EDF+
annotation channels are tolerated on read (skipped by label) but
discontinuous files (``EDF+D``) are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import MalformedHeader, TruncatedData, UnknownChannel, UnsupportedVariant
from .types import Recording

HEADER_BYTES = 256
SIGNAL_HEADER_BYTES = 256
ANNOTATION_LABEL = "EDF Annotations"


@dataclass
class SignalHeader:
    label: str
    transducer: str = ""
    physical_dimension: str = "uV"
    physical_min: float = -1000.0
    physical_max: float = 1000.0
    digital_min: int = -32768
    digital_max: int = 32767
    prefiltering: str = ""
    samples_per_record: int = 256
    reserved: str = ""

    @property
    def scale(self) -> float:
        return (self.physical_max - self.physical_min) / (
            self.digital_max - self.digital_min
        )

    def digital_to_physical(self, digital: np.ndarray) -> np.ndarray:
        return self.physical_min + (
            digital.astype(np.float64) - self.digital_min
        ) * self.scale


@dataclass
class EdfHeader:
    version: str = "0"
    patient_id: str = "X X X X"
    recording_id: str = "Startdate X X X X"
    start_date: str = "01.01.00"
    start_time: str = "00.00.00"
    reserved: str = ""
    n_records: int = 0
    record_duration: float = 1.0
    signals: list[SignalHeader] = field(default_factory=list)

    @property
    def n_signals(self) -> int:
        return len(self.signals)

    @property
    def header_bytes(self) -> int:
        return HEADER_BYTES + SIGNAL_HEADER_BYTES * self.n_signals

    @property
    def duration(self) -> float:
        return self.n_records * self.record_duration

    @property
    def samples_per_record(self) -> list[int]:
        return [s.samples_per_record for s in self.signals]


def _ascii(data: bytes, offset: int, size: int, what: str) -> str:
    raw = data[offset : offset + size]
    try:
        return raw.decode("ascii").rstrip()
    except UnicodeDecodeError:
        raise MalformedHeader(f"{what}: field is not ASCII") from None


def _int(data: bytes, offset: int, size: int, what: str) -> int:
    text = _ascii(data, offset, size, what).strip()
    try:
        return int(text)
    except ValueError:
        raise MalformedHeader(f"{what}: expected integer, got {text!r}") from None


def _float(data: bytes, offset: int, size: int, what: str) -> float:
    text = _ascii(data, offset, size, what).strip()
    try:
        return float(text)
    except ValueError:
        raise MalformedHeader(f"{what}: expected number, got {text!r}") from None


def parse_edf_header(data: bytes) -> EdfHeader:
    """Parse the fixed-layout ASCII header from raw file bytes.

    Raises MalformedHeader for short/inconsistent headers and
    UnsupportedVariant for discontinuous EDF+D files.
    """
    if len(data) < HEADER_BYTES:
        raise MalformedHeader(
            f"file holds {len(data)} bytes, EDF header needs {HEADER_BYTES}"
        )

    reserved = _ascii(data, 192, 44, "reserved")
    if reserved.startswith("EDF+D"):
        raise UnsupportedVariant("discontinuous EDF+D records are not supported")

    header = EdfHeader(
        version=_ascii(data, 0, 8, "version"),
        patient_id=_ascii(data, 8, 80, "patient id"),
        recording_id=_ascii(data, 88, 80, "recording id"),
        start_date=_ascii(data, 168, 8, "start date"),
        start_time=_ascii(data, 176, 8, "start time"),
        reserved=reserved,
        n_records=_int(data, 236, 8, "number of records"),
        record_duration=_float(data, 244, 8, "record duration"),
    )
    declared_header_bytes = _int(data, 184, 8, "header size")
    n_signals = _int(data, 252, 4, "number of signals")

    if n_signals < 1:
        raise MalformedHeader(f"need at least 1 signal, header declares {n_signals}")
    if header.n_records < 0:
        raise MalformedHeader(f"negative record count {header.n_records}")
    if header.record_duration <= 0:
        raise MalformedHeader(f"record duration must be > 0, got {header.record_duration}")

    expected = HEADER_BYTES + SIGNAL_HEADER_BYTES * n_signals
    if declared_header_bytes != expected:
        raise MalformedHeader(
            f"header size field says {declared_header_bytes}, "
            f"{n_signals} signals imply {expected}"
        )
    if len(data) < expected:
        raise MalformedHeader(
            f"file holds {len(data)} bytes, signal headers need {expected}"
        )

    # Signal headers store each field for all signals consecutively.
    ns = n_signals

    def block(start: int, size: int, idx: int) -> int:
        return HEADER_BYTES + start * ns + size * idx

    for i in range(ns):
        sig = SignalHeader(
            label=_ascii(data, block(0, 16, i), 16, f"signal {i} label"),
            transducer=_ascii(data, block(16, 80, i), 80, f"signal {i} transducer"),
            physical_dimension=_ascii(data, block(96, 8, i), 8, f"signal {i} dimension"),
            physical_min=_float(data, block(104, 8, i), 8, f"signal {i} physical min"),
            physical_max=_float(data, block(112, 8, i), 8, f"signal {i} physical max"),
            digital_min=_int(data, block(120, 8, i), 8, f"signal {i} digital min"),
            digital_max=_int(data, block(128, 8, i), 8, f"signal {i} digital max"),
            prefiltering=_ascii(data, block(136, 80, i), 80, f"signal {i} prefiltering"),
            samples_per_record=_int(data, block(216, 8, i), 8, f"signal {i} samples/record"),
            reserved=_ascii(data, block(224, 32, i), 32, f"signal {i} reserved"),
        )
        if sig.digital_max <= sig.digital_min:
            raise MalformedHeader(
                f"signal {i} ({sig.label!r}): digital range "
                f"[{sig.digital_min}, {sig.digital_max}] is degenerate"
            )
        if sig.physical_max == sig.physical_min:
            raise MalformedHeader(
                f"signal {i} ({sig.label!r}): physical min equals max"
            )
        if sig.samples_per_record < 1:
            raise MalformedHeader(
                f"signal {i} ({sig.label!r}): samples/record must be >= 1"
            )
        header.signals.append(sig)

    return header


def read_edf_signals(
    data: bytes, channels: Sequence[str] | None = None
) -> Recording:
    """Decode an EDF byte string into a physical-unit Recording.

    Args:
        data: complete file contents.
        channels: ordered channel labels to select. None keeps every
            non-annotation signal in file order. First match wins when a
            label appears twice.

    Raises UnknownChannel for labels absent from the file, TruncatedData
    when the data area is shorter than the header promises, and
    UnsupportedVariant when selected channels disagree on sampling rate.
    """
    header = parse_edf_header(data)
    labels = [s.label for s in header.signals]

    if channels is None:
        selected = [i for i, lab in enumerate(labels) if lab != ANNOTATION_LABEL]
    else:
        selected = []
        for want in channels:
            try:
                selected.append(labels.index(want))
            except ValueError:
                raise UnknownChannel(
                    f"channel {want!r} not in file (has {labels})"
                ) from None
    if not selected:
        raise UnknownChannel("no data channels selected")

    spr = header.samples_per_record
    rates = {spr[i] for i in selected}
    if len(rates) > 1:
        raise UnsupportedVariant(
            f"selected channels have differing samples/record: {sorted(rates)}"
        )

    samples_per_full_record = sum(spr)
    total_values = header.n_records * samples_per_full_record
    available = len(data) - header.header_bytes
    if available < 2 * total_values:
        raise TruncatedData(
            f"data area holds {available} bytes, header promises {2 * total_values}"
        )

    raw = np.frombuffer(
        data, dtype="<i2", count=total_values, offset=header.header_bytes
    ).reshape(header.n_records, samples_per_full_record)

    offsets = np.concatenate([[0], np.cumsum(spr)])
    n_per_channel = header.n_records * spr[selected[0]]
    out = np.empty((len(selected), n_per_channel), dtype=np.float64)
    for row, i in enumerate(selected):
        digital = raw[:, offsets[i] : offsets[i] + spr[i]].reshape(-1)
        out[row] = header.signals[i].digital_to_physical(digital)

    fs = spr[selected[0]] / header.record_duration
    return Recording(
        channel_labels=[labels[i] for i in selected], fs=fs, samples=out
    )


def load_edf(path: str | Path, channels: Sequence[str] | None = None) -> Recording:
    return read_edf_signals(Path(path).read_bytes(), channels)


def read_edf_duration(path: str | Path) -> float:
    """Cheap duration probe: reads only the header area of the file."""
    with open(path, "rb") as fh:
        head = fh.read(HEADER_BYTES)
        if len(head) < HEADER_BYTES:
            raise MalformedHeader(f"{path}: file shorter than EDF header")
        n_signals = _int(head, 252, 4, "number of signals")
        head += fh.read(SIGNAL_HEADER_BYTES * max(n_signals, 0))
    return parse_edf_header(head).duration


def _pad(text: str, size: int, what: str) -> bytes:
    raw = text.encode("ascii")
    if len(raw) > size:
        raise ValueError(f"{what}: {text!r} exceeds {size} bytes")
    return raw.ljust(size)


def _num(value: float | int, size: int, what: str) -> bytes:
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    return _pad(f"{value:g}" if isinstance(value, float) else str(value), size, what)


def build_edf_bytes(
    recording: Recording,
    physical_max: float | None = None,
    patient_id: str = "X X X X",
    recording_id: str = "Startdate X X X X",
    start_date: str = "01.01.00",
    start_time: str = "00.00.00",
) -> bytes:
    """Serialize a Recording as base-format EDF (1 s records, int16 samples).

    Physical range defaults to +/- ceil(max|sample|); amplitudes are
    quantized onto the full 16-bit digital range, so read-back values land
    within one quantization step of the originals. Requires integer fs and
    a whole number of seconds of data.
    """
    fs = recording.fs
    if fs != int(fs):
        raise ValueError(f"EDF writer needs integer sampling rate, got {fs}")
    spr = int(fs)
    if recording.n_samples % spr != 0:
        raise ValueError(
            f"{recording.n_samples} samples is not a whole number of "
            f"1 s records at fs={spr}"
        )
    n_records = recording.n_samples // spr

    if physical_max is None:
        peak = float(np.max(np.abs(recording.samples))) if recording.n_samples else 0.0
        physical_max = max(1.0, math.ceil(peak))
    physical_max = float(int(physical_max))  # integer bounds survive the 8-char field
    dmin, dmax = -32768, 32767
    pmin = -physical_max

    parts = [
        _pad("0", 8, "version"),
        _pad(patient_id, 80, "patient id"),
        _pad(recording_id, 80, "recording id"),
        _pad(start_date, 8, "start date"),
        _pad(start_time, 8, "start time"),
        _num(HEADER_BYTES + SIGNAL_HEADER_BYTES * recording.n_channels, 8, "header size"),
        _pad("", 44, "reserved"),
        _num(n_records, 8, "n records"),
        _num(1, 8, "record duration"),
        _num(recording.n_channels, 4, "n signals"),
    ]
    labels = recording.channel_labels
    parts += [_pad(lab, 16, f"label {lab}") for lab in labels]
    parts += [_pad("", 80, "transducer")] * len(labels)
    parts += [_pad("uV", 8, "dimension")] * len(labels)
    parts += [_num(pmin, 8, "physical min")] * len(labels)
    parts += [_num(physical_max, 8, "physical max")] * len(labels)
    parts += [_num(dmin, 8, "digital min")] * len(labels)
    parts += [_num(dmax, 8, "digital max")] * len(labels)
    parts += [_pad("", 80, "prefiltering")] * len(labels)
    parts += [_num(spr, 8, "samples/record")] * len(labels)
    parts += [_pad("", 32, "signal reserved")] * len(labels)

    scale = (dmax - dmin) / (physical_max - pmin)
    digital = np.rint((recording.samples - pmin) * scale + dmin)
    digital = np.clip(digital, dmin, dmax).astype("<i2")

    # Record layout: all of channel 0's chunk, then channel 1's, per record.
    chunks = digital.reshape(recording.n_channels, n_records, spr)
    body = chunks.transpose(1, 0, 2).tobytes()
    return b"".join(parts) + body


def write_edf(path: str | Path, recording: Recording, **kwargs) -> None:
    Path(path).write_bytes(build_edf_bytes(recording, **kwargs))
