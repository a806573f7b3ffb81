"""Fold construction, class balancing, and the training loop contract."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from seizcast.errors import InsufficientSeizures, MissingClass, NoTestSamples
from seizcast.net.model import ModelConfig
from seizcast.segment.timing import Label
from seizcast.train.loop import (
    Seeds,
    balance_undersample,
    fit_standardizer,
    loocv,
    split_fold,
    train_fold,
)
from seizcast.train.optim import TrainConfig

FAST = TrainConfig(lr=1e-2, batch_size=2, max_epochs=2)
SEEDS = Seeds(data=0, init=1, train=2)


def model_cfg(dataset, n_filters=2):
    return ModelConfig(
        input_shape=tuple(dataset.tensor_shape), n_filters=n_filters, seed=1
    )


class TestBalance:
    def test_interictal_trimmed_to_preictal_count(self, tiny_dataset):
        # 7 preictal (fold 0 only) vs 18 interictal: trims to 7/7.
        pre = [
            s
            for s in tiny_dataset.samples
            if s.label is Label.PREICTAL and s.fold_key == 0
        ]
        inter = [s for s in tiny_dataset.samples if s.label is Label.INTERICTAL]
        balanced = balance_undersample(pre + inter, seed=0)
        kept_pre = [s for s in balanced if s.label is Label.PREICTAL]
        kept_inter = [s for s in balanced if s.label is Label.INTERICTAL]
        assert {id(s) for s in kept_pre} == {id(s) for s in pre}
        assert len(kept_inter) == len(pre)
        assert {id(s) for s in kept_inter} <= {id(s) for s in inter}

    def test_preictal_majority_keeps_everything(self, tiny_dataset):
        # 21 preictal vs 18 interictal: only interictal may shrink, so
        # nothing is dropped and the classes stay unequal.
        balanced = balance_undersample(tiny_dataset.samples, seed=0)
        assert {id(s) for s in balanced} == {
            id(s) for s in tiny_dataset.samples
        }

    def test_seed_changes_interictal_selection(self, tiny_dataset):
        pre = [
            s
            for s in tiny_dataset.samples
            if s.label is Label.PREICTAL and s.fold_key == 0
        ]
        inter = [s for s in tiny_dataset.samples if s.label is Label.INTERICTAL]
        pick = lambda seed: {
            id(s)
            for s in balance_undersample(pre + inter, seed=seed)
            if s.label is Label.INTERICTAL
        }
        assert pick(0) != pick(1)

    def test_deterministic_for_seed(self, tiny_dataset):
        a = balance_undersample(tiny_dataset.samples, seed=5)
        b = balance_undersample(tiny_dataset.samples, seed=5)
        assert [id(s) for s in a] == [id(s) for s in b]

    def test_canonical_output_order(self, tiny_dataset):
        balanced = balance_undersample(tiny_dataset.samples, seed=3)
        keys = [(int(s.label), s.fold_key, s.origin) for s in balanced]
        assert keys == sorted(keys)

    def test_missing_class_rejected(self, tiny_dataset):
        only_pre = [s for s in tiny_dataset.samples if s.label is Label.PREICTAL]
        with pytest.raises(MissingClass):
            balance_undersample(only_pre, seed=0)


class TestStandardizer:
    def test_normalizes_fit_data(self, tiny_dataset):
        stdzr = fit_standardizer(tiny_dataset.samples)
        stacked = np.stack(
            [stdzr.apply(s.tensor) for s in tiny_dataset.samples]
        )
        assert np.max(np.abs(stacked.mean(axis=(0, 3)))) < 1e-6
        assert np.max(np.abs(stacked.std(axis=(0, 3)) - 1.0)) < 1e-6

    def test_stat_shapes_are_channel_by_frequency(self, tiny_dataset):
        stdzr = fit_standardizer(tiny_dataset.samples)
        c, f, _ = tiny_dataset.tensor_shape
        assert stdzr.mean.shape == (c, f)
        assert stdzr.std.shape == (c, f)
        assert np.all(stdzr.std > 0.0)


class TestSplit:
    def test_partition_is_exact(self, tiny_dataset):
        train, test = split_fold(tiny_dataset, 1)
        assert len(train) + len(test) == len(tiny_dataset.samples)
        assert {id(s) for s in train} & {id(s) for s in test} == set()

    def test_test_preictal_comes_from_held_out_seizure(self, tiny_dataset):
        _, test = split_fold(tiny_dataset, 1)
        pre = [s for s in test if s.label is Label.PREICTAL]
        assert pre and all(s.fold_key == 1 for s in pre)

    def test_no_held_out_preictal_leaks_into_train(self, tiny_dataset):
        train, _ = split_fold(tiny_dataset, 1)
        assert all(s.fold_key != 1 for s in train)

    def test_test_classes_balanced(self, tiny_dataset):
        _, test = split_fold(tiny_dataset, 0)
        pre = [s for s in test if s.label is Label.PREICTAL]
        inter = [s for s in test if s.label is Label.INTERICTAL]
        assert len(pre) == len(inter)

    def test_test_interictal_nearest_in_time(self, tiny_dataset):
        _, test = split_fold(tiny_dataset, 0)
        pre = [s for s in test if s.label is Label.PREICTAL]
        inter = [s for s in test if s.label is Label.INTERICTAL]
        center = np.mean([s.origin for s in pre])
        chosen = max(abs(s.origin - center) for s in inter)
        others = [
            s
            for s in tiny_dataset.samples
            if s.label is Label.INTERICTAL and id(s) not in {id(t) for t in inter}
        ]
        assert all(abs(s.origin - center) >= chosen for s in others)

    def test_unknown_fold_rejected(self, tiny_dataset):
        with pytest.raises(NoTestSamples):
            split_fold(tiny_dataset, 99)


class TestTrainFold:
    def test_deterministic_end_to_end(self, tiny_dataset):
        cfg = model_cfg(tiny_dataset)
        p1, s1, r1 = train_fold(tiny_dataset, 0, cfg, FAST, SEEDS)
        p2, s2, r2 = train_fold(tiny_dataset, 0, cfg, FAST, SEEDS)
        assert np.array_equal(p1.flatten(), p2.flatten())
        assert np.array_equal(s1.mean, s2.mean)
        assert r1 == r2

    def test_normalization_fit_on_training_split_only(self, tiny_dataset):
        cfg = model_cfg(tiny_dataset)
        _, stdzr, _ = train_fold(tiny_dataset, 0, cfg, FAST, SEEDS)
        train, _ = split_fold(tiny_dataset, 0)
        balanced = balance_undersample(
            train, np.random.default_rng([SEEDS.data, 0])
        )
        expected = fit_standardizer(balanced)
        assert np.array_equal(stdzr.mean, expected.mean)
        assert np.array_equal(stdzr.std, expected.std)

    def test_zero_epochs_gives_chance_level(self, tiny_dataset):
        cfg = model_cfg(tiny_dataset)
        frozen = dataclasses.replace(FAST, max_epochs=0)
        _, _, report = train_fold(tiny_dataset, 0, cfg, frozen, SEEDS)
        assert report.epochs_run == 0
        # untrained network on a balanced test split: chance plus noise
        assert 0.2 <= report.acc <= 0.8

    def test_report_counts_match_test_size(self, tiny_dataset):
        cfg = model_cfg(tiny_dataset)
        _, _, report = train_fold(tiny_dataset, 0, cfg, FAST, SEEDS)
        _, test = split_fold(tiny_dataset, 0)
        assert report.counts.total == len(test)


class TestLoocv:
    def test_one_report_per_fold(self, tiny_dataset):
        reports, aggregate = loocv(tiny_dataset, model_cfg(tiny_dataset), FAST, SEEDS)
        assert [r.fold_key for r in reports] == [0, 1, 2]
        assert aggregate["n_folds"] == 3
        for metric in ("acc", "tpr", "tnr"):
            stats = aggregate[metric]
            assert set(stats) == {"mean", "min", "q1", "median", "q3", "max"}
            assert stats["min"] <= stats["median"] <= stats["max"]

    def test_aggregate_mean_matches_reports(self, tiny_dataset):
        reports, aggregate = loocv(tiny_dataset, model_cfg(tiny_dataset), FAST, SEEDS)
        assert aggregate["acc"]["mean"] == pytest.approx(
            np.mean([r.acc for r in reports])
        )

    def test_too_few_folds_rejected(self, tiny_dataset):
        crippled = dataclasses.replace(tiny_dataset, fold_keys=[0, 1])
        with pytest.raises(InsufficientSeizures):
            loocv(crippled, model_cfg(tiny_dataset), FAST, SEEDS)
