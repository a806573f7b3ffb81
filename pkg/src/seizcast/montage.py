"""Fixed channel montage used for CHB-MIT recordings.

CHB-MIT montages drift across files and subjects; selecting this ordered
18-channel bipolar subset keeps tensor shapes stable. Labels occasionally
repeat inside a file (e.g. a duplicated T8-P8); selection takes the first
match.
"""

CHBMIT_MONTAGE_18 = [
    "FP1-F7",
    "F7-T7",
    "T7-P7",
    "P7-O1",
    "FP1-F3",
    "F3-C3",
    "C3-P3",
    "P3-O1",
    "FP2-F4",
    "F4-C4",
    "C4-P4",
    "P4-O2",
    "FP2-F8",
    "F8-T8",
    "T8-P8",
    "P8-O2",
    "FZ-CZ",
    "CZ-PZ",
]
