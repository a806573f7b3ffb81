from .loop import (
    Seeds,
    Standardizer,
    aggregate_reports,
    balance_undersample,
    fit_standardizer,
    loocv,
    split_fold,
    train_fold,
)
from .metrics import ConfusionCounts, FoldReport, metrics, report_from_counts
from .optim import AdamState, TrainConfig, adam_step

__all__ = [
    "AdamState",
    "ConfusionCounts",
    "FoldReport",
    "Seeds",
    "Standardizer",
    "TrainConfig",
    "adam_step",
    "aggregate_reports",
    "balance_undersample",
    "fit_standardizer",
    "loocv",
    "metrics",
    "report_from_counts",
    "split_fold",
    "train_fold",
]
