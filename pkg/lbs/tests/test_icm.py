# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np
from numpy.testing import assert_allclose, assert_equal
import pytest

from lbs.errors import ShapeError
from lbs.icm import IcmModel, icm_reward, icm_train_step
from lbs.latent import Transition, Transitions
from lbs.tools.analytical import DeterministicToy


def test_icm_perfect_prediction():
    m = IcmModel(2, 1, init='zeros', rng=np.random.default_rng(0))
    b = DeterministicToy(10, np.random.default_rng(1), 2, 1).transitions
    assert_allclose(m.reward(b), 0.0, rtol=0, atol=0)


def test_icm_feature_error():
    """prediction (0, 0), features (1, 1): mean squared error 1"""
    m = IcmModel(2, 1, init='zeros', rng=np.random.default_rng(0))
    m.feature_net.biases[-1].value[...] = 1.0
    t = Transition([0.2, 0.4], [0.1], [0.3, -0.5])
    assert_allclose(icm_reward(m, t), 1.0, rtol=1e-12)


def test_icm_reward_per_transition():
    rng = np.random.default_rng(2)
    b = DeterministicToy(20, rng, 2, 1).transitions
    m = IcmModel(2, 1, rng=rng)
    perm = rng.permutation(20)
    assert_allclose(m.reward(b[perm]), m.reward(b)[perm], rtol=1e-12)
    assert np.all(m.reward(b) >= 0)
    with pytest.raises(ShapeError):
        m.reward(DeterministicToy(5, rng, 3, 1).transitions)


def test_icm_inverse_degenerate():
    """Constant states and actions: the inverse loss goes to 0"""
    b = Transitions(np.full((32, 2), 0.3), np.full((32, 1), 0.7),
                    np.full((32, 2), -0.2))
    m = IcmModel(2, 1, lr=3e-3, rng=np.random.default_rng(3))
    for i in range(500):
        losses = icm_train_step(m, b)
    assert_equal(sorted(losses), ['forward', 'inverse'])
    assert losses['inverse'] < 1e-3


def test_icm_forward_detached():
    """Without the inverse loss the features stay as initialized"""
    b = DeterministicToy(64, np.random.default_rng(4), 2, 1).transitions
    m = IcmModel(2, 1, inverse_weight=0.0, lr=3e-3,
                 rng=np.random.default_rng(5))
    features = m.feature_net.state_dict()
    losses = [m.train_step(b)['forward'] for i in range(500)]
    for name, value in m.feature_net.state_dict().items():
        assert_equal(value, features[name], err_msg=name)
    assert np.mean(losses[-20:]) < np.mean(losses[:20])


def test_icm_without_actions():
    m = IcmModel(3, 0, rng=np.random.default_rng(6))
    assert m.inverse_net is None
    b = Transitions(np.zeros((4, 3)), [], np.ones((4, 3)))
    features = m.feature_net.state_dict()
    assert_equal(m.train_step(b)['inverse'], 0.0)
    m.train_step(b)
    # forward prediction over fixed random features
    for name, value in m.feature_net.state_dict().items():
        assert_equal(value, features[name], err_msg=name)


if __name__ == '__main__':
    test_icm_perfect_prediction()
    test_icm_feature_error()
    test_icm_reward_per_transition()
    test_icm_inverse_degenerate()
    test_icm_forward_detached()
    test_icm_without_actions()
