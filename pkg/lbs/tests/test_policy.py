# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np
from numpy.testing import assert_allclose, assert_equal
import pytest

import lbs.diffnum as dn
from lbs.errors import ShapeError
from lbs.policy import (ActorCritic, RolloutBuffer, act, combine_rewards,
                        gae, gae_advantages, clipped_surrogate, ppo_loss,
                        ppo_update)


def _rollout(ac, seed, T=64, ext=0.0):
    rng = np.random.default_rng(seed)
    buf = RolloutBuffer(T, 2, 1)
    for i in range(T):
        s = rng.normal(size=2)
        a, logp, v = ac.act(s, rng)
        buf.add(s, s, a, logp, v, ext, i % 20 == 19, s + 0.1)
    buf.int_rewards[:] = rng.uniform(size=T)
    buf.rewards[:] = combine_rewards(buf.ext_rewards, buf.int_rewards)
    buf.last_value = 0.5
    return buf


def test_policy_zero_init():
    ac = ActorCritic(2, 1, init='zeros', rng=np.random.default_rng(0))
    s = np.array([0.4, -1.2])
    assert_allclose(ac.log_prob(s, [0.0]), -0.918939, rtol=0, atol=1e-6)
    assert_allclose(ac.log_prob(s, [0.7]), ac.log_prob(s, [-0.7]),
                    rtol=1e-15)
    action, logp, value = act(ac, s, np.random.default_rng(1))
    assert_equal(value, 0.0)
    assert_allclose(logp, -0.5 * np.log(2 * np.pi) - 0.5 * action[0] ** 2,
                    rtol=1e-12)


def test_policy_act_reproducible():
    ac = ActorCritic(3, 2, rng=np.random.default_rng(2))
    s = np.ones(3)
    r1, r2 = np.random.default_rng(3), np.random.default_rng(3)
    for i in range(10):
        a1, l1, v1 = ac.act(s, r1)
        a2, l2, v2 = ac.act(s, r2)
        assert_equal(a1, a2)
        assert_equal((l1, v1), (l2, v2))


def test_policy_state_dependent_std():
    ac = ActorCritic(2, 2, state_dependent_std=True,
                     rng=np.random.default_rng(4))
    assert ac.log_std is None
    states = np.random.default_rng(5).normal(size=(10, 2))
    d = ac.distribution(states)
    assert np.all(d.std.value > 0)
    # acting uses the same head as the recorded distribution
    mean, std = ac._mean_std(states)
    assert_allclose(mean, d.mean.value, rtol=1e-12, atol=1e-15)
    assert_allclose(std, d.std.value, rtol=1e-12)
    action, logp, value = ac.act(np.zeros(2), np.random.default_rng(6))
    assert_equal(action.shape, (2,))


def test_policy_combine_rewards():
    assert_allclose(combine_rewards(100.0, 0.3, 0.0, 1.0), 0.3, rtol=1e-15)
    assert_allclose(combine_rewards(2.5, 0.3, 1.0, 0.0), 2.5, rtol=1e-15)
    assert_allclose(combine_rewards(2.0, 1.0, 0.5, 2.0), 3.0, rtol=1e-15)
    # a zero weight drops its term, whatever it holds
    assert_equal(combine_rewards([np.nan, np.inf], [1.0, 2.0]), [1.0, 2.0])


def test_policy_gae():
    adv, ret = gae([1.0, 1.0], [0.0, 0.0], [False, False], 0.0, 1.0, 1.0)
    assert_allclose(adv, [2.0, 1.0], rtol=1e-15)
    adv, ret = gae(np.zeros(5), np.zeros(5), np.zeros(5, dtype=bool), 0.0)
    assert_equal(adv, np.zeros(5))
    # nothing is bootstrapped across the end of an episode
    adv, ret = gae([1.0, 1.0, 1.0], [0.0, 0.0, 0.0], [False, True, False],
                   10.0, 1.0, 1.0)
    assert_allclose(adv, [2.0, 1.0, 11.0], rtol=1e-15)
    assert_allclose(ret, adv, rtol=1e-15)


def test_policy_gae_normalized():
    ac = ActorCritic(2, 1, rng=np.random.default_rng(7))
    buf = _rollout(ac, 8)
    adv, ret = gae_advantages(buf, 0.99, 0.95)
    assert abs(adv.mean()) < 1e-9
    assert_allclose(adv.std(), 1.0, rtol=0, atol=1e-6)
    raw, raw_ret = gae(buf.rewards, buf.values, buf.dones, buf.last_value,
                       0.99, 0.95)
    assert_allclose(ret, raw_ret, rtol=1e-15)


def test_policy_clipped_surrogate():
    s = clipped_surrogate(dn.Node([1.5, 1.5, 0.5, 1.0]),
                          np.array([2.0, -2.0, -1.0, 3.0]), 0.2)
    assert_allclose(s.value, [2.4, -3.0, -0.8, 3.0], rtol=1e-15)


def test_policy_loss_identity_ratio():
    ac = ActorCritic(2, 1, init='zeros', rng=np.random.default_rng(9))
    buf = _rollout(ac, 10)
    gae_advantages(buf)
    loss, terms = ppo_loss(ac, buf.obs, buf.actions, buf.logps,
                           buf.advantages, buf.returns)
    assert_allclose(terms['ratio'], 1.0, rtol=0, atol=1e-12)
    assert_allclose(terms['policy'], 0.0, rtol=0, atol=1e-12)
    assert_allclose(terms['entropy'], 1.418939, rtol=0, atol=1e-6)


def test_policy_update():
    ac = ActorCritic(2, 1, rng=np.random.default_rng(11))
    buf = _rollout(ac, 12)
    gae_advantages(buf)
    losses = ppo_update(ac, buf, np.random.default_rng(13), epochs=3,
                        minibatches=4)
    assert losses['first_ratio_deviation'] < 1e-6
    assert_equal(sorted(losses), ['entropy', 'first_ratio_deviation',
                                  'policy', 'value'])
    assert np.all(np.exp(ac.log_std.value) > 0)


def test_policy_ignores_external_rewards():
    """With eta_e = 0 the external reward has no effect on the update"""
    states = []
    for ext in [0.0, 100.0]:
        ac = ActorCritic(2, 1, rng=np.random.default_rng(14))
        buf = _rollout(ac, 15, ext=ext)
        gae_advantages(buf)
        ppo_update(ac, buf, np.random.default_rng(16), epochs=2,
                   minibatches=4)
        states.append(ac.state_dict())
    for name in states[0]:
        assert_equal(states[0][name], states[1][name], err_msg=name)


def test_policy_buffer_and_state():
    ac = ActorCritic(2, 1, rng=np.random.default_rng(17))
    buf = _rollout(ac, 18, T=8)
    assert buf.full
    with pytest.raises(ShapeError):
        buf.add(np.zeros(2), np.zeros(2), [0.0], 0.0, 0.0, 0.0, False,
                np.zeros(2))
    assert_equal(len(buf.transitions()), 8)
    buf.reset()
    assert_equal(buf.pos, 0)

    other = ActorCritic(2, 1, rng=np.random.default_rng(19))
    ac.log_std.value[...] = -0.5
    other.load_state_dict(ac.state_dict())
    s = np.array([0.1, 0.2])
    assert_equal(other.log_prob(s, [0.3]), ac.log_prob(s, [0.3]))
    with pytest.raises(ShapeError):
        ActorCritic(2, 0)


if __name__ == '__main__':
    test_policy_zero_init()
    test_policy_act_reproducible()
    test_policy_state_dependent_std()
    test_policy_combine_rewards()
    test_policy_gae()
    test_policy_gae_normalized()
    test_policy_clipped_surrogate()
    test_policy_loss_identity_ratio()
    test_policy_update()
    test_policy_ignores_external_rewards()
    test_policy_buffer_and_state()
