"""Fold splitting, class balancing, and the LOOCV training loop.

Every source of randomness is a named seed: the data seed drives
balancing, the init seed drives weight initialization, the train seed
drives batch shuffling. Per-fold streams are derived from
(seed, fold_key) so folds are independent of each other and of dataset
iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import InsufficientSeizures, MissingClass, NoTestSamples
from ..net.model import (
    ModelConfig,
    ModelParams,
    init_params,
    model_backward,
    model_forward,
    model_loss,
    params_from_flat,
)
from ..segment.dataset import Dataset, SpectralSample
from ..segment.timing import Label
from .metrics import ConfusionCounts, FoldReport, report_from_counts
from .optim import AdamState, TrainConfig, adam_step

STD_FLOOR = 1e-6


@dataclass(frozen=True)
class Seeds:
    """The three named random streams of a run."""

    data: int = 0
    init: int = 1
    train: int = 2


def _sorted_canonical(samples: list[SpectralSample]) -> list[SpectralSample]:
    return sorted(samples, key=lambda s: (int(s.label), s.fold_key, s.origin))


def _fold_seed(base: int, fold_key: int) -> int:
    return int(np.random.SeedSequence([base, fold_key]).generate_state(1)[0])


def balance_undersample(
    samples: list[SpectralSample], seed: int | np.random.Generator
) -> list[SpectralSample]:
    """Subsample interictal samples without replacement to the preictal count.

    Preictal samples are kept untouched. If interictal samples are
    already no more numerous than preictal ones, all of them are kept.
    Output order is canonical (label, fold_key, origin), so the result is
    a pure function of (sample set, seed).

    Raises:
        MissingClass: one of the classes is absent.
    """
    rng = np.random.default_rng(seed)
    pre = [s for s in samples if s.label is Label.PREICTAL]
    inter = _sorted_canonical([s for s in samples if s.label is Label.INTERICTAL])
    if not pre or not inter:
        raise MissingClass(
            f"need both classes to balance, got {len(pre)} preictal / "
            f"{len(inter)} interictal"
        )
    if len(inter) > len(pre):
        chosen = rng.choice(len(inter), size=len(pre), replace=False)
        inter = [inter[i] for i in sorted(chosen)]
    return _sorted_canonical(pre + inter)


@dataclass(frozen=True)
class Standardizer:
    """Per (channel, frequency-bin) affine normalization."""

    mean: np.ndarray
    std: np.ndarray

    def apply(self, tensor: np.ndarray) -> np.ndarray:
        x = np.asarray(tensor, dtype=np.float64)
        return (x - self.mean[:, :, None]) / self.std[:, :, None]

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}


def fit_standardizer(samples: list[SpectralSample]) -> Standardizer:
    """Mean/std per (channel, bin) over all samples and frames of a split."""
    stack = np.stack([s.tensor for s in samples]).astype(np.float64)
    mean = stack.mean(axis=(0, 3))
    std = np.maximum(stack.std(axis=(0, 3)), STD_FLOOR)
    return Standardizer(mean=mean, std=std)


def split_fold(
    dataset: Dataset, fold_key: int
) -> tuple[list[SpectralSample], list[SpectralSample]]:
    """Partition samples into train and test sets for one held-out seizure.

    The test set is the held-out seizure's preictal samples plus an
    equally sized block of interictal samples whose origins lie nearest
    the held-out preictal windows, keeping the test classes balanced and
    temporally adjacent. Everything else trains.

    Raises:
        NoTestSamples: the fold has no preictal samples, or there are no
            interictal samples to test against.
    """
    test_pre = [s for s in dataset.samples if s.fold_key == fold_key]
    if not test_pre:
        raise NoTestSamples(f"no preictal samples for fold {fold_key}")
    inter = _sorted_canonical(
        [s for s in dataset.samples if s.label is Label.INTERICTAL]
    )
    if not inter:
        raise NoTestSamples("no interictal samples to build a test split from")
    center = float(np.mean([s.origin for s in test_pre]))
    ranked = sorted(inter, key=lambda s: (abs(s.origin - center), s.origin))
    test_inter = _sorted_canonical(ranked[: len(test_pre)])
    test = _sorted_canonical(test_pre + test_inter)
    test_ids = {id(s) for s in test}
    train = [s for s in dataset.samples if id(s) not in test_ids]
    return _sorted_canonical(train), test


def _epoch_batches(
    n: int, batch_size: int, rng: np.random.Generator
) -> list[np.ndarray]:
    order = rng.permutation(n)
    return [order[i : i + batch_size] for i in range(0, n, batch_size)]


def train_fold(
    dataset: Dataset,
    fold_key: int,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    seeds: Seeds,
) -> tuple[ModelParams, Standardizer, FoldReport]:
    """Train on all folds but one and evaluate on the held-out seizure.

    model_cfg.seed is replaced by a stream derived from
    (seeds.init, fold_key), so every fold initializes independently.

    Returns:
        (params, standardizer, report). The standardizer is fit on the
        balanced training split only and is required to reproduce the
        reported evaluation.
    """
    train_samples, test_samples = split_fold(dataset, fold_key)
    balanced = balance_undersample(
        train_samples, np.random.default_rng([seeds.data, fold_key])
    )
    stdzr = fit_standardizer(balanced)
    x_train = [stdzr.apply(s.tensor) for s in balanced]
    y_train = [int(s.label is Label.PREICTAL) for s in balanced]

    cfg = replace(model_cfg, seed=_fold_seed(seeds.init, fold_key))
    theta = init_params(cfg).flatten()
    state = AdamState.zeros(theta.size)
    rng_train = np.random.default_rng([seeds.train, fold_key])

    for _ in range(train_cfg.max_epochs):
        for batch in _epoch_batches(len(x_train), train_cfg.batch_size, rng_train):
            params = params_from_flat(theta, cfg)
            grad_sum = None
            for i in batch:
                _, cache = model_forward(params, cfg, x_train[i])
                g = model_backward(params, cfg, cache, y_train[i]).flatten()
                grad_sum = g if grad_sum is None else grad_sum + g
            theta, state = adam_step(theta, grad_sum / len(batch), state, train_cfg)

    params = params_from_flat(theta, cfg)
    losses = []
    for x, y in zip(x_train, y_train):
        _, cache = model_forward(params, cfg, x)
        losses.append(model_loss(cache, y))
    final_loss = float(np.mean(losses))

    tp = fn = tn = fp = 0
    for s in test_samples:
        probs, _ = model_forward(params, cfg, stdzr.apply(s.tensor))
        predicted_preictal = probs[1] >= train_cfg.threshold
        if s.label is Label.PREICTAL:
            tp, fn = tp + predicted_preictal, fn + (not predicted_preictal)
        else:
            tn, fp = tn + (not predicted_preictal), fp + predicted_preictal
    counts = ConfusionCounts(tp=int(tp), fn=int(fn), tn=int(tn), fp=int(fp))
    report = report_from_counts(fold_key, counts, train_cfg.max_epochs, final_loss)
    return params, stdzr, report


def aggregate_reports(reports: list[FoldReport]) -> dict:
    """Mean plus five-number summary per metric across folds."""
    out: dict = {"n_folds": len(reports)}
    for name in ("acc", "tpr", "tnr"):
        values = np.array([getattr(r, name) for r in reports], dtype=np.float64)
        q1, median, q3 = np.percentile(values, [25, 50, 75])
        out[name] = {
            "mean": float(values.mean()),
            "min": float(values.min()),
            "q1": float(q1),
            "median": float(median),
            "q3": float(q3),
            "max": float(values.max()),
        }
    return out


def loocv(
    dataset: Dataset,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    seeds: Seeds,
) -> tuple[list[FoldReport], dict]:
    """Leave-one-seizure-out cross-validation over every usable fold.

    Raises:
        InsufficientSeizures: fewer than 3 folds are available.
    """
    fold_keys = sorted(dataset.fold_keys)
    if len(fold_keys) < 3:
        raise InsufficientSeizures(
            f"cross-validation needs >= 3 leading seizures, have {len(fold_keys)}"
        )
    reports = []
    for key in fold_keys:
        _, _, report = train_fold(dataset, key, model_cfg, train_cfg, seeds)
        reports.append(report)
    return reports, aggregate_reports(reports)
