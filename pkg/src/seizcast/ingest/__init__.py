"""EEG ingestion: EDF files, CHB-MIT annotations, synthetic recordings."""

from .chbmit import format_summary, parse_chbmit_summary
from .edf import (
    EdfHeader,
    SignalHeader,
    build_edf_bytes,
    load_edf,
    parse_edf_header,
    read_edf_duration,
    read_edf_signals,
    write_edf,
)
from .synthetic import SyntheticSpec, generate_synthetic_recording
from .timeline import SubjectTimeline, TimelineFile, from_recording, load_subject
from .types import Recording, SeizureAnnotation, validate_annotations

__all__ = [
    "EdfHeader",
    "Recording",
    "SeizureAnnotation",
    "SignalHeader",
    "SubjectTimeline",
    "SyntheticSpec",
    "TimelineFile",
    "build_edf_bytes",
    "format_summary",
    "from_recording",
    "generate_synthetic_recording",
    "load_edf",
    "load_subject",
    "parse_chbmit_summary",
    "parse_edf_header",
    "read_edf_duration",
    "read_edf_signals",
    "validate_annotations",
    "write_edf",
]
