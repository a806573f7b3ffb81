"""Assemble a subject's files into one continuous analysis timeline.

Files are concatenated in summary order using cumulative durations, so
file k starts where file k-1 ended; wall-clock gaps between files are not
modeled. Per-file seizure times are shifted onto this timeline and
renumbered globally. Windows never straddle file boundaries (the segment
module intersects intervals with the spans reported here).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from ..errors import TimelineError
from .chbmit import parse_chbmit_summary
from .edf import load_edf, read_edf_duration
from .types import Recording, SeizureAnnotation, validate_annotations


@dataclass
class TimelineFile:
    """One recorded span: either an EDF on disk or an in-memory recording."""

    name: str
    offset: float
    duration: float
    path: Path | None = None
    recording: Recording | None = None

    @property
    def end(self) -> float:
        return self.offset + self.duration

    def load(self, channels: Sequence[str] | None = None) -> Recording:
        if self.recording is not None:
            return self.recording
        if self.path is None:
            raise TimelineError(f"{self.name}: no path and no in-memory recording")
        return load_edf(self.path, channels)


@dataclass
class SubjectTimeline:
    files: list[TimelineFile]
    annotations: list[SeizureAnnotation]

    @property
    def recorded_end(self) -> float:
        return self.files[-1].end if self.files else 0.0

    @property
    def spans(self) -> list[tuple[float, float]]:
        return [(f.offset, f.end) for f in self.files]

    def iter_recordings(
        self, channels: Sequence[str] | None = None
    ) -> Iterator[tuple[TimelineFile, Recording]]:
        for f in self.files:
            yield f, f.load(channels)


def from_recording(
    recording: Recording,
    annotations: list[SeizureAnnotation],
    name: str = "memory",
) -> SubjectTimeline:
    """Wrap a single in-memory recording as a one-file timeline."""
    validate_annotations(annotations)
    f = TimelineFile(
        name=name, offset=0.0, duration=recording.duration, recording=recording
    )
    return SubjectTimeline(files=[f], annotations=list(annotations))


def load_subject(edf_dir: str | Path, summary_path: str | Path) -> SubjectTimeline:
    """Build a timeline from a CHB-MIT style directory plus summary file.

    Only headers are read here; signal data is loaded lazily per file.
    """
    edf_dir = Path(edf_dir)
    entries = parse_chbmit_summary(Path(summary_path).read_text())
    if not entries:
        raise TimelineError(f"{summary_path}: summary lists no files")

    files: list[TimelineFile] = []
    annotations: list[SeizureAnnotation] = []
    offset = 0.0
    for name, local in entries:
        path = edf_dir / name
        if not path.exists():
            raise TimelineError(f"summary references missing file {path}")
        duration = read_edf_duration(path)
        files.append(
            TimelineFile(name=name, offset=offset, duration=duration, path=path)
        )
        for ann in local:
            if ann.end > duration:
                raise TimelineError(
                    f"{name}: seizure [{ann.onset}, {ann.end}] ends after the "
                    f"file does ({duration:g} s)"
                )
            annotations.append(
                SeizureAnnotation(
                    seizure_index=len(annotations),
                    onset=offset + ann.onset,
                    end=offset + ann.end,
                )
            )
        offset += duration

    annotations.sort(key=lambda a: a.onset)
    annotations = [
        SeizureAnnotation(seizure_index=i, onset=a.onset, end=a.end)
        for i, a in enumerate(annotations)
    ]
    try:
        validate_annotations(annotations)
    except ValueError as exc:
        raise TimelineError(str(exc)) from None
    return SubjectTimeline(files=files, annotations=annotations)
