"""Activation, pooling, and classifier-head layers."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seizcast.errors import NonFiniteInput, PoolLargerThanInput, ShapeMismatch
from seizcast.net.layers import (
    dense_softmax_xent,
    global_avg_pool,
    global_avg_pool_backward,
    maxpool3d,
    maxpool3d_backward,
    relu,
    relu_backward,
    softmax,
)

from .oracles import numeric_grad


class TestRelu:
    def test_forward(self):
        x = np.array([-2.0, -0.5, 0.0, 0.5, 3.0])
        assert relu(x).tolist() == [0.0, 0.0, 0.0, 0.5, 3.0]

    def test_backward_masks_nonpositive(self):
        x = np.array([-1.0, 2.0, 0.0])
        g = np.array([10.0, 10.0, 10.0])
        assert relu_backward(x, g).tolist() == [0.0, 10.0, 0.0]


class TestMaxPool:
    def test_worked_example(self):
        x = np.arange(16.0).reshape(1, 2, 2, 4)
        pooled, _ = maxpool3d(x, (2, 2, 2))
        # windows cover the whole block pairwise; max is the last corner
        assert pooled.shape == (1, 1, 1, 2)
        assert pooled.reshape(-1).tolist() == [13.0, 15.0]

    def test_model_first_stage_shape(self):
        x = np.zeros((4, 18, 128, 59))
        pooled, idx = maxpool3d(x, (1, 2, 2))
        assert pooled.shape == (4, 18, 64, 29)
        assert idx.shape == pooled.shape

    def test_trailing_remainder_cropped(self):
        x = np.arange(10.0).reshape(1, 1, 1, 10)
        pooled, _ = maxpool3d(x, (1, 1, 4))
        assert pooled.reshape(-1).tolist() == [3.0, 7.0]  # sample 8,9 dropped

    def test_ties_pick_first_position(self):
        x = np.zeros((1, 1, 1, 4))
        pooled, idx = maxpool3d(x, (1, 1, 2))
        assert pooled.reshape(-1).tolist() == [0.0, 0.0]
        assert idx.reshape(-1).tolist() == [0, 2]  # flat index of each window's first cell

    def test_pool_larger_than_input(self):
        with pytest.raises(PoolLargerThanInput):
            maxpool3d(np.zeros((1, 1, 1, 3)), (1, 1, 4))

    def test_backward_routes_to_argmax(self):
        x = np.array([[[[1.0, 5.0, 2.0, 0.0]]]])
        pooled, idx = maxpool3d(x, (1, 1, 2))
        g = np.array([[[[10.0, 20.0]]]])
        back = maxpool3d_backward(idx, g, x.shape)
        assert back.reshape(-1).tolist() == [0.0, 10.0, 20.0, 0.0]

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 500))
    def test_gradient_mass_conserved(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((2, 4, 4, 6))
        pooled, idx = maxpool3d(x, (2, 2, 2))
        g = rng.standard_normal(pooled.shape)
        back = maxpool3d_backward(idx, g, x.shape)
        assert back.sum() == pytest.approx(g.sum(), rel=1e-12)
        # scattered values land on cells holding each window's maximum
        assert np.count_nonzero(back) <= g.size


class TestGap:
    def test_forward_is_per_map_mean(self):
        x = np.arange(24.0).reshape(2, 2, 2, 3)
        feats = global_avg_pool(x)
        assert feats.shape == (2,)
        assert feats[0] == pytest.approx(x[0].mean())

    def test_backward_spreads_uniformly(self):
        g = np.array([12.0])
        back = global_avg_pool_backward(g, (1, 2, 2, 3))
        assert np.all(back == 1.0)


class TestSoftmax:
    def test_sums_to_one(self):
        p = softmax(np.array([0.3, -1.2]))
        assert abs(p.sum() - 1.0) < 1e-12

    def test_stable_for_large_logits(self):
        p = softmax(np.array([1000.0, 999.0]))
        assert np.all(np.isfinite(p))
        assert p[0] > p[1]

    @settings(max_examples=50, deadline=None)
    @given(
        a=st.floats(-50, 50, allow_nan=False),
        b=st.floats(-50, 50, allow_nan=False),
    )
    def test_shift_invariance(self, a, b):
        logits = np.array([a, b])
        assert np.allclose(softmax(logits), softmax(logits + 7.0), atol=1e-12)


class TestDenseHead:
    def test_zero_weights_give_log2_loss(self):
        features = np.ones(6)
        probs, loss, _ = dense_softmax_xent(features, np.zeros((2, 6)), np.zeros(2), 1)
        assert probs.tolist() == [0.5, 0.5]
        assert loss == pytest.approx(np.log(2.0), rel=1e-12)

    def test_gradients_match_numeric(self):
        rng = np.random.default_rng(37)
        features = rng.standard_normal(5)
        w = rng.standard_normal((2, 5))
        b = rng.standard_normal(2)
        _, _, grads = dense_softmax_xent(features, w, b, 0)
        for name, arr in (("w", w), ("b", b), ("features", features)):
            num = numeric_grad(lambda: dense_softmax_xent(features, w, b, 0)[1], arr)
            assert np.max(np.abs(grads[name] - num)) < 1e-6

    def test_nonfinite_features_rejected(self):
        features = np.array([1.0, np.nan])
        with pytest.raises(NonFiniteInput):
            dense_softmax_xent(features, np.zeros((2, 2)), np.zeros(2), 0)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ShapeMismatch):
            dense_softmax_xent(np.ones(3), np.zeros((2, 4)), np.zeros(2), 0)
