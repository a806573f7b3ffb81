"""Confusion counts and the ACC/TPR/TNR metrics (positive = preictal)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InvalidSpec, UndefinedMetric


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fn: int
    tn: int
    fp: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fn, self.tn, self.fp) < 0:
            raise InvalidSpec("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.tn + self.fp


def metrics(counts: ConfusionCounts) -> tuple[float, float, float]:
    """(accuracy, true positive rate, true negative rate) from counts.

    Ratios are formed as exact integer fractions and divided once, so
    equal counts give bit-identical metrics regardless of how they were
    accumulated.

    Raises:
        UndefinedMetric: a denominator is zero; the message names the
            metric rather than silently reporting 0.
    """
    if counts.total == 0:
        raise UndefinedMetric("accuracy undefined: no test samples")
    if counts.tp + counts.fn == 0:
        raise UndefinedMetric("tpr undefined: no positive (preictal) samples")
    if counts.tn + counts.fp == 0:
        raise UndefinedMetric("tnr undefined: no negative (interictal) samples")
    acc = Fraction(counts.tp + counts.tn, counts.total)
    tpr = Fraction(counts.tp, counts.tp + counts.fn)
    tnr = Fraction(counts.tn, counts.tn + counts.fp)
    return float(acc), float(tpr), float(tnr)


@dataclass(frozen=True)
class FoldReport:
    """Outcome of one leave-one-seizure-out fold."""

    fold_key: int
    counts: ConfusionCounts
    acc: float
    tpr: float
    tnr: float
    epochs_run: int
    final_loss: float

    def to_dict(self) -> dict:
        return {
            "fold_key": self.fold_key,
            "counts": {
                "tp": self.counts.tp,
                "fn": self.counts.fn,
                "tn": self.counts.tn,
                "fp": self.counts.fp,
            },
            "acc": self.acc,
            "tpr": self.tpr,
            "tnr": self.tnr,
            "epochs_run": self.epochs_run,
            "final_loss": self.final_loss,
        }


def report_from_counts(
    fold_key: int, counts: ConfusionCounts, epochs_run: int, final_loss: float
) -> FoldReport:
    acc, tpr, tnr = metrics(counts)
    return FoldReport(
        fold_key=fold_key,
        counts=counts,
        acc=acc,
        tpr=tpr,
        tnr=tnr,
        epochs_run=epochs_run,
        final_loss=final_loss,
    )
