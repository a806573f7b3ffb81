"""Adam update rule on a flat parameter vector."""

from __future__ import annotations

import numpy as np
import pytest

from seizcast.errors import InvalidSpec, NonFiniteGradient
from seizcast.train.optim import AdamState, TrainConfig, adam_step

CFG = TrainConfig()


class TestSingleStep:
    def test_zero_gradient_is_a_no_op(self):
        theta = np.array([1.0, -2.0, 3.0])
        new_theta, state = adam_step(theta, np.zeros(3), AdamState.zeros(3), CFG)
        assert np.array_equal(new_theta, theta)
        assert state.step == 1

    def test_first_step_moves_by_lr_in_sign_direction(self):
        theta = np.zeros(4)
        grad = np.array([0.5, -3.0, 10.0, -0.01])
        new_theta, _ = adam_step(theta, grad, AdamState.zeros(4), CFG)
        # bias-corrected first step is -lr * g / (|g| + eps')
        assert np.allclose(new_theta, -CFG.lr * np.sign(grad), rtol=1e-5)

    def test_inputs_not_mutated(self):
        theta = np.array([1.0, 2.0])
        grad = np.array([0.3, -0.4])
        state = AdamState.zeros(2)
        adam_step(theta, grad, state, CFG)
        assert theta.tolist() == [1.0, 2.0]
        assert grad.tolist() == [0.3, -0.4]
        assert state.step == 0
        assert np.all(state.m == 0.0)

    def test_nonfinite_gradient_rejected(self):
        with pytest.raises(NonFiniteGradient):
            adam_step(np.zeros(2), np.array([1.0, np.inf]), AdamState.zeros(2), CFG)

    def test_determinism(self):
        rng = np.random.default_rng(0)
        theta = rng.standard_normal(5)
        grad = rng.standard_normal(5)
        a, _ = adam_step(theta, grad, AdamState.zeros(5), CFG)
        b, _ = adam_step(theta, grad, AdamState.zeros(5), CFG)
        assert np.array_equal(a, b)


class TestTrajectory:
    def test_converges_on_quadratic(self):
        target = np.array([3.0, -1.0, 0.5])
        theta = np.zeros(3)
        state = AdamState.zeros(3)
        cfg = TrainConfig(lr=0.05)
        for _ in range(500):
            grad = 2.0 * (theta - target)
            theta, state = adam_step(theta, grad, state, cfg)
        assert np.max(np.abs(theta - target)) < 1e-3

    def test_step_counter_advances(self):
        theta = np.zeros(2)
        state = AdamState.zeros(2)
        for expected in (1, 2, 3):
            theta, state = adam_step(theta, np.ones(2), state, CFG)
            assert state.step == expected


class TestConfigValidation:
    def test_bad_lr(self):
        with pytest.raises(InvalidSpec):
            TrainConfig(lr=0.0)

    def test_bad_betas(self):
        with pytest.raises(InvalidSpec):
            TrainConfig(beta1=1.0)
        with pytest.raises(InvalidSpec):
            TrainConfig(beta2=-0.1)

    def test_bad_batch(self):
        with pytest.raises(InvalidSpec):
            TrainConfig(batch_size=0)
