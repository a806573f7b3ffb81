"""Summary annotation parser: both time-label variants plus error paths."""

from __future__ import annotations

import pytest

from seizcast.errors import SummaryParseError
from seizcast.ingest.chbmit import format_summary, parse_chbmit_summary
from seizcast.ingest.types import SeizureAnnotation

PLAIN = """\
Data Sampling Rate: 256 Hz
*************************

Channels in EDF Files:
Channel 1: FP1-F7
Channel 2: F7-T7

File Name: subj01_01.edf
File Start Time: 11:42:54
File End Time: 12:42:54
Number of Seizures in File: 0

File Name: subj01_03.edf
File Start Time: 13:43:04
File End Time: 14:43:04
Number of Seizures in File: 1
Seizure Start Time: 2996 seconds
Seizure End Time: 3036 seconds
"""

NUMBERED = """\
File Name: subj02_19.edf
Number of Seizures in File: 2
Seizure 1 Start Time: 107 seconds
Seizure 1 End Time: 245 seconds
Seizure 2 Start Time: 2000 seconds
Seizure 2 End Time: 2055 seconds
"""


class TestParse:
    def test_plain_variant(self):
        entries = parse_chbmit_summary(PLAIN)
        assert [name for name, _ in entries] == ["subj01_01.edf", "subj01_03.edf"]
        assert entries[0][1] == []
        (ann,) = entries[1][1]
        assert (ann.onset, ann.end) == (2996.0, 3036.0)
        assert ann.seizure_index == 0

    def test_numbered_variant(self):
        (_, anns), = parse_chbmit_summary(NUMBERED)
        assert [(a.onset, a.end) for a in anns] == [(107.0, 245.0), (2000.0, 2055.0)]
        assert [a.seizure_index for a in anns] == [0, 1]

    def test_out_of_order_pairs_sorted_by_onset(self):
        text = NUMBERED.replace("107", "2500").replace("245", "2600")
        (_, anns), = parse_chbmit_summary(text)
        assert [a.onset for a in anns] == [2000.0, 2500.0]

    def test_count_mismatch_reports_line(self):
        text = PLAIN.replace("Number of Seizures in File: 1", "Number of Seizures in File: 2")
        with pytest.raises(SummaryParseError) as exc:
            parse_chbmit_summary(text)
        assert "declared 2" in str(exc.value)

    def test_end_before_start_rejected(self):
        text = NUMBERED.replace("Seizure 1 End Time: 245", "Seizure 1 End Time: 50")
        with pytest.raises(SummaryParseError):
            parse_chbmit_summary(text)

    def test_missing_end_time_rejected(self):
        text = "\n".join(
            line for line in NUMBERED.splitlines() if "Seizure 2 End" not in line
        )
        with pytest.raises(SummaryParseError):
            parse_chbmit_summary(text)

    def test_non_numeric_time_rejected(self):
        text = NUMBERED.replace("107", "soon")
        with pytest.raises(SummaryParseError):
            parse_chbmit_summary(text)

    def test_empty_text_yields_no_entries(self):
        assert parse_chbmit_summary("") == []


def test_format_parse_round_trip():
    entries = [
        ("a.edf", [SeizureAnnotation(0, 10.0, 40.0), SeizureAnnotation(1, 90.0, 120.0)]),
        ("b.edf", []),
        ("c.edf", [SeizureAnnotation(0, 5.5, 6.5)]),
    ]
    assert parse_chbmit_summary(format_summary(entries, fs=256.0)) == entries
