# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np
from numpy.testing import assert_allclose, assert_equal
import pytest

from lbs.latent import Transition
from lbs.random_actions import random_bonus, RandomModel, UniformPolicy
from lbs.tools.analytical import NoiseToy


def test_random_bonus():
    assert_equal(random_bonus(), 0.0)
    m = RandomModel()
    b = NoiseToy(7, np.random.default_rng(0)).transitions
    assert_equal(m.reward(b), np.zeros(7))
    assert_equal(m.reward(Transition([0.0], [0.0], [1.0])), 0.0)
    assert_equal(m.train_step(b), 0.0)
    assert_equal(m.state_dict(), {})


def test_random_uniform_policy():
    low, high = np.array([-1.0, 0.0]), np.array([1.0, 4.0])
    policy = UniformPolicy(low, high)
    rng = np.random.default_rng(1)
    N = 10000
    actions = np.array([policy.act(None, rng)[0] for i in range(N)])
    assert np.all(actions >= low) and np.all(actions <= high)
    sigma = (high - low) / np.sqrt(12)
    assert np.all(np.abs(actions.mean(axis=0) - (low + high) / 2)
                  < 3 * sigma / np.sqrt(N))
    action, logp, value = policy.act(None, rng)
    assert_allclose(logp, -np.log(8.0), rtol=1e-12)
    assert_equal(value, 0.0)

    with pytest.raises(ValueError):
        UniformPolicy([1.0], [-1.0])


if __name__ == '__main__':
    test_random_bonus()
    test_random_uniform_policy()
