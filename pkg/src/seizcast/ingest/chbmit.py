"""CHB-MIT ``*-summary.txt`` seizure annotation parser and writer.

The layout is line oriented: blocks introduced by ``File Name:`` declare a
seizure count followed by that many start/end time pairs. Both the plain
(``Seizure Start Time:``) and numbered (``Seizure 1 Start Time:``) variants
found across subjects are accepted.
"""

from __future__ import annotations

import re

from ..errors import SummaryParseError
from .types import SeizureAnnotation

_FILECOUNT_RE = re.compile(r"^Number of Seizures in File:\s*(\S+)", re.IGNORECASE)
_START_RE = re.compile(r"^Seizure\s*\d*\s*Start\s*Time:\s*(\S+)\s*sec", re.IGNORECASE)
_END_RE = re.compile(r"^Seizure\s*\d*\s*End\s*Time:\s*(\S+)\s*sec", re.IGNORECASE)


def _seconds(token: str, line_no: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise SummaryParseError(f"{what} is not numeric: {token!r}", line_no) from None


class _Block:
    def __init__(self, name: str, line_no: int):
        self.name = name
        self.line_no = line_no
        self.declared: int | None = None
        self.pairs: list[tuple[float, float]] = []
        self.pending_start: float | None = None
        self.pending_line = 0

    def finish(self, end_line: int) -> tuple[str, list[SeizureAnnotation]]:
        if self.pending_start is not None:
            raise SummaryParseError(
                f"seizure start at line {self.pending_line} has no end time",
                end_line,
            )
        declared = self.declared if self.declared is not None else 0
        if declared != len(self.pairs):
            raise SummaryParseError(
                f"file {self.name}: declared {declared} seizures, "
                f"found {len(self.pairs)}",
                end_line,
            )
        ordered = sorted(self.pairs)
        return self.name, [
            SeizureAnnotation(seizure_index=i, onset=s, end=e)
            for i, (s, e) in enumerate(ordered)
        ]


def parse_chbmit_summary(text: str) -> list[tuple[str, list[SeizureAnnotation]]]:
    """Parse summary text into (file name, annotations) entries, in file order.

    Annotations are file-local times sorted by onset; files declaring zero
    seizures yield empty lists. Raises SummaryParseError (with a line
    number) on count mismatches, missing end times, non-numeric seconds, or
    end <= start.
    """
    entries: list[tuple[str, list[SeizureAnnotation]]] = []
    block: _Block | None = None

    lines = text.splitlines()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line.lower().startswith("file name:"):
            if block is not None:
                entries.append(block.finish(line_no))
            block = _Block(line.split(":", 1)[1].strip(), line_no)
            continue
        if block is None:
            continue  # preamble (sampling rate, channel list, ...)

        m = _FILECOUNT_RE.match(line)
        if m:
            count = m.group(1)
            if not count.isdigit():
                raise SummaryParseError(
                    f"seizure count is not an integer: {count!r}", line_no
                )
            block.declared = int(count)
            continue

        m = _START_RE.match(line)
        if m:
            if block.pending_start is not None:
                raise SummaryParseError(
                    f"seizure start at line {block.pending_line} has no end time",
                    line_no,
                )
            block.pending_start = _seconds(m.group(1), line_no, "start time")
            block.pending_line = line_no
            continue

        m = _END_RE.match(line)
        if m:
            if block.pending_start is None:
                raise SummaryParseError("end time without a start time", line_no)
            end = _seconds(m.group(1), line_no, "end time")
            if end <= block.pending_start:
                raise SummaryParseError(
                    f"end time {end:g} <= start time {block.pending_start:g}",
                    line_no,
                )
            block.pairs.append((block.pending_start, end))
            block.pending_start = None

    if block is not None:
        entries.append(block.finish(len(lines) + 1))
    return entries


def format_summary(
    entries: list[tuple[str, list[SeizureAnnotation]]], fs: float | None = None
) -> str:
    """Render (file name, annotations) entries in the CHB-MIT summary layout."""
    out: list[str] = []
    if fs is not None:
        out += [f"Data Sampling Rate: {fs:g} Hz", "*" * 25, ""]
    for name, annotations in entries:
        out.append(f"File Name: {name}")
        out.append(f"Number of Seizures in File: {len(annotations)}")
        for i, ann in enumerate(annotations, start=1):
            out.append(f"Seizure {i} Start Time: {ann.onset:g} seconds")
            out.append(f"Seizure {i} End Time: {ann.end:g} seconds")
        out.append("")
    return "\n".join(out)
