"""Exception types shared across the pipeline."""


class SeizcastError(Exception):
    """Base class for every error raised by this package."""


# ingest ---------------------------------------------------------------

class MalformedHeader(SeizcastError):
    """EDF header is too short, non-numeric, or internally inconsistent."""


class UnsupportedVariant(SeizcastError):
    """EDF feature outside the 1992 base format (e.g. discontinuous EDF+D)."""


class TruncatedData(SeizcastError):
    """EDF data area holds fewer bytes than the header promises."""


class UnknownChannel(SeizcastError):
    """A requested channel label is absent from the file."""


class SummaryParseError(SeizcastError):
    """Seizure summary text does not follow the expected layout."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class TimelineError(SeizcastError):
    """Subject files/annotations cannot be assembled into one timeline."""


class InvalidSpec(SeizcastError):
    """Synthetic-recording spec cannot produce a consistent layout."""


# segment --------------------------------------------------------------

class WindowTooShort(SeizcastError):
    """Window holds fewer samples than one transform frame."""


class InsufficientSeizures(SeizcastError):
    """Fewer leading seizures than leave-one-out validation needs."""


# net ------------------------------------------------------------------

class ShapeMismatch(SeizcastError):
    """Tensor shapes are inconsistent with the layer or model spec."""


class PoolLargerThanInput(SeizcastError):
    pass


class NonFiniteInput(SeizcastError):
    pass


class StaleCache(SeizcastError):
    """Forward cache does not match the parameters passed to backward."""


# train ----------------------------------------------------------------

class MissingClass(SeizcastError):
    pass


class NonFiniteGradient(SeizcastError):
    pass


class UndefinedMetric(SeizcastError):
    """A metric denominator is zero for these confusion counts."""


class NoTestSamples(SeizcastError):
    pass


# cli ------------------------------------------------------------------

class ConfigError(SeizcastError):
    """Config file is unreadable, has unknown keys, or bad values."""


class MissingRun(SeizcastError):
    """A run directory lacks the expected cross-validation outputs."""
