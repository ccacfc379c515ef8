# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np

from . import diffnum as dn
from .errors import ShapeError, check_finite
from .latent import Transitions
from .tools.math import minibatch_indices, softplus

###########################################################################
# policy - PPO actor-critic for continuous actions
#
# The agent maximizes the discounted sum of the combined reward
#
#   r = eta_e r_ext + eta_i r_int
#
# with the clipped-surrogate objective, generalized advantage estimation
# and a Gaussian policy (state-conditioned mean, learned std).
###########################################################################

_LOG_2PI = np.log(2 * np.pi)


class ActorCritic(dn.ModelBase):
    """
    Gaussian policy and state-value function.

    Parameters
    ----------
    state_dim, action_dim : int
        dimensions
    hidden : int
        width of the two tanh hidden layers of both networks
    state_dependent_std : bool
        if ``True``, the policy network also outputs (softplus) standard
        deviations; otherwise a global learned log-std is used
    init : str
        ``'orthogonal'`` (default) or ``'zeros'``, see
        :class:`~lbs.diffnum.Mlp`
    lr : float
        Adam learning rate
    max_grad_norm : float or None
        gradient clipping threshold
    rng : numpy.random.Generator
        generator for the initial weights
    """
    def __init__(self, state_dim, action_dim, hidden=64,
                 state_dependent_std=False, init='orthogonal', lr=3e-4,
                 max_grad_norm=None, rng=None):
        if rng is None:
            rng = np.random.default_rng()
        if action_dim < 1:
            raise ShapeError('A policy needs at least one action dimension')
        self.state_dim = int(state_dim)
        self.action_dim = A = int(action_dim)
        self.state_dependent_std = state_dependent_std
        out = 2 * A if state_dependent_std else A
        self.pi_net = dn.Mlp([self.state_dim, hidden, hidden, out],
                             activation='tanh', init=init, out_gain=0.01,
                             rng=rng, name='pi')
        self.v_net = dn.Mlp([self.state_dim, hidden, hidden, 1],
                            activation='tanh', init=init, out_gain=1.0,
                            rng=rng, name='v')
        self.nets = (self.pi_net, self.v_net)
        self.log_std = None if state_dependent_std else \
            dn.Param(np.zeros(A), 'pi.log_std')
        self.optimizer = dn.Adam(self.params, lr=lr,
                                 max_grad_norm=max_grad_norm)

    @property
    def params(self):
        params = super(ActorCritic, self).params
        if self.log_std is not None:
            params.append(self.log_std)
        return params

    def state_dict(self):
        state = super(ActorCritic, self).state_dict()
        if self.log_std is not None:
            state[self.log_std.name] = self.log_std.value.copy()
        return state

    def load_state_dict(self, state):
        super(ActorCritic, self).load_state_dict(state)
        if self.log_std is not None:
            self.log_std.value[...] = state[self.log_std.name]

    def distribution(self, states):
        """
        Policy distribution for a batch of (normalized) states (recorded).
        """
        out = self.pi_net.forward(states)
        if self.state_dependent_std:
            return dn.split_gaussian_head(out)
        std = dn.exp(self.log_std) * np.ones(out.shape)
        return dn.DiagonalGaussian(out, std)

    def value(self, states):
        """State values, shape (*n*,) (recorded)."""
        return self.v_net.forward(states)[:, 0]

    def _mean_std(self, state):
        out = self.pi_net.evaluate(state)
        if self.state_dependent_std:
            A = self.action_dim
            return out[..., :A], softplus(out[..., A:]) + dn.STD_FLOOR
        return out, np.exp(self.log_std.value) * np.ones(out.shape)

    def log_prob(self, state, action):
        """Log density of **action** under the policy at **state**."""
        mean, std = self._mean_std(np.asarray(state, dtype=float))
        z = (np.asarray(action, dtype=float) - mean) / std
        return np.sum(-0.5 * _LOG_2PI - np.log(std) - 0.5 * z ** 2, axis=-1)

    def act(self, state, rng):
        """
        Sample an action for a single (normalized) state.

        Returns
        -------
        action : numpy array
            unclamped sample (the environment clamps it to its box)
        logp : float
            log density of the unclamped sample
        value : float
            value estimate of the state
        """
        state = np.asarray(state, dtype=float)
        mean, std = self._mean_std(state)
        action = mean + std * rng.standard_normal(self.action_dim)
        logp = float(self.log_prob(state, action))
        value = float(self.v_net.evaluate(state)[0])
        return action, logp, value


def act(ac, s, rng):
    return ac.act(s, rng)


def combine_rewards(r_e, r_i, eta_e=0.0, eta_i=1.0):
    """
    Combined reward ``eta_e * r_e + eta_i * r_i``. A zero weight drops its
    term entirely, so it has no influence even for non-finite inputs.
    """
    r_e = np.asarray(r_e, dtype=float)
    r_i = np.asarray(r_i, dtype=float)
    total = np.zeros(np.broadcast(r_e, r_i).shape)
    if eta_e:
        total = total + eta_e * r_e
    if eta_i:
        total = total + eta_i * r_i
    return total if total.ndim else float(total)


class RolloutBuffer(object):
    """
    Fixed-horizon storage for one rollout.

    Parameters
    ----------
    horizon : int
        number of steps per rollout
    state_dim, action_dim : int
        dimensions

    Attributes
    ----------
    obs : numpy array
        normalized states the policy acted on, shape (horizon, state_dim)
    states, next_states : numpy array
        raw environment states of every transition
    actions, logps, values, ext_rewards, int_rewards, rewards, dones :
        per-step data; **rewards** holds the combined, normalized rewards
        used for learning
    advantages, returns : numpy array
        filled by :func:`gae_advantages`
    """
    def __init__(self, horizon, state_dim, action_dim):
        self.horizon = T = int(horizon)
        self.obs = np.zeros((T, state_dim))
        self.states = np.zeros((T, state_dim))
        self.next_states = np.zeros((T, state_dim))
        self.actions = np.zeros((T, action_dim))
        self.logps = np.zeros(T)
        self.values = np.zeros(T)
        self.ext_rewards = np.zeros(T)
        self.int_rewards = np.zeros(T)
        self.rewards = np.zeros(T)
        self.dones = np.zeros(T, dtype=bool)
        self.advantages = np.zeros(T)
        self.returns = np.zeros(T)
        self.last_value = 0.0
        self.pos = 0

    @property
    def full(self):
        return self.pos == self.horizon

    def add(self, obs, state, action, logp, value, ext_reward, done,
            next_state):
        if self.full:
            raise ShapeError('Rollout buffer is full')
        i = self.pos
        self.obs[i] = obs
        self.states[i] = state
        self.actions[i] = action
        self.logps[i] = logp
        self.values[i] = value
        self.ext_rewards[i] = ext_reward
        self.dones[i] = done
        self.next_states[i] = next_state
        self.pos += 1

    def reset(self):
        self.pos = 0

    def transitions(self):
        """The raw-state transitions of the rollout."""
        return Transitions(self.states[:self.pos], self.actions[:self.pos],
                           self.next_states[:self.pos],
                           self.ext_rewards[:self.pos],
                           self.int_rewards[:self.pos], self.dones[:self.pos])


def gae(rewards, values, dones, last_value, gamma=0.99, lam=0.95):
    """
    Generalized advantage estimates (not normalized).

    Parameters
    ----------
    rewards, values : numpy array
        per-step rewards and value estimates, shape (*T*,)
    dones : numpy array of bool
        ``True`` where the episode ended after the step; nothing is
        bootstrapped across it
    last_value : float
        value of the state following the last step (used if that step is
        not terminal)
    gamma, lam : float
        discount and GAE parameter

    Returns
    -------
    advantages, returns : numpy array
        shape (*T*,); ``returns = advantages + values``
    """
    rewards = np.asarray(rewards, dtype=float)
    values = np.asarray(values, dtype=float)
    T = rewards.size
    advantages = np.zeros(T)
    lastgaelam = 0.0
    for t in reversed(range(T)):
        nonterminal = 1.0 - float(dones[t])
        next_value = values[t + 1] if t < T - 1 else last_value
        delta = rewards[t] + gamma * next_value * nonterminal - values[t]
        lastgaelam = delta + gamma * lam * nonterminal * lastgaelam
        advantages[t] = lastgaelam
    return advantages, advantages + values


def normalize_advantages(adv):
    """Zero mean, unit standard deviation (unchanged if constant)."""
    std = adv.std()
    return (adv - adv.mean()) / std if std > 0 else adv - adv.mean()


def gae_advantages(buf, gamma=0.99, lam=0.95):
    """
    Fill ``buf.advantages`` (normalized per rollout) and ``buf.returns``
    (value targets from the raw advantages).

    Returns
    -------
    advantages, returns : numpy array
    """
    T = buf.pos
    adv, ret = gae(buf.rewards[:T], buf.values[:T], buf.dones[:T],
                   buf.last_value, gamma, lam)
    check_finite(adv, 'advantages')
    buf.advantages[:T] = normalize_advantages(adv)
    buf.returns[:T] = ret
    return buf.advantages[:T], buf.returns[:T]


def clipped_surrogate(ratio, adv, clip=0.2):
    """
    Per-sample PPO objective min(ρA, clip(ρ, 1 − ε, 1 + ε) A) (to be
    maximized).
    """
    return dn.minimum(ratio * adv, dn.clip(ratio, 1 - clip, 1 + clip) * adv)


def ppo_loss(ac, obs, actions, old_logps, adv, returns, clip=0.2,
             vf_coef=0.5, ent_coef=0.001):
    """
    PPO loss −surrogate + vf_coef · value MSE − ent_coef · entropy on a
    minibatch.

    Returns
    -------
    loss : Node
        scalar loss
    terms : dict
        ``'policy'``, ``'value'``, ``'entropy'`` and ``'ratio'`` (numpy
        array of probability ratios)
    """
    d = ac.distribution(obs)
    ratio = dn.exp(dn.gaussian_log_density(d, actions) - old_logps)
    policy = -dn.mean(clipped_surrogate(ratio, adv, clip))
    value = dn.mean(dn.square(ac.value(obs) - returns))
    entropy = dn.mean(dn.gaussian_entropy(d))
    loss = policy + vf_coef * value - ent_coef * entropy
    terms = {'policy': float(policy.value), 'value': float(value.value),
             'entropy': float(entropy.value), 'ratio': ratio.value}
    return loss, terms


def ppo_update(ac, buf, rng, clip=0.2, epochs=10, minibatches=32,
               vf_coef=0.5, ent_coef=0.001):
    """
    Clipped-surrogate PPO update: **epochs** passes over the rollout, each
    split into **minibatches** random minibatches, one Adam step per
    minibatch.

    Parameters
    ----------
    ac : ActorCritic
        policy and value function to update
    buf : RolloutBuffer
        rollout with advantages and returns computed
    rng : numpy.random.Generator
        source of the minibatch partitions

    Returns
    -------
    losses : dict
        mean ``'policy'``, ``'value'`` and ``'entropy'`` terms over all
        minibatches and ``'first_ratio_deviation'``, the largest |ρ − 1|
        seen in the first minibatch (0 up to rounding)
    """
    T = buf.pos
    sums = {'policy': 0.0, 'value': 0.0, 'entropy': 0.0}
    count = 0
    first = None
    for epoch in range(epochs):
        for idx in minibatch_indices(T, minibatches, rng):
            loss, terms = ppo_loss(ac, buf.obs[idx], buf.actions[idx],
                                   buf.logps[idx], buf.advantages[idx],
                                   buf.returns[idx], clip, vf_coef, ent_coef)
            check_finite(loss.value, 'PPO loss')
            if first is None:
                first = float(np.max(np.abs(terms['ratio'] - 1)))
            ac.optimizer.minimize(loss)
            for key in sums:
                sums[key] += terms[key]
            count += 1
    losses = {key: val / max(count, 1) for key, val in sums.items()}
    losses['first_ratio_deviation'] = first or 0.0
    return losses
