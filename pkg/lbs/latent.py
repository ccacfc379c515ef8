# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from collections import namedtuple

import numpy as np

from . import diffnum as dn
from .errors import ShapeError, check_finite

###########################################################################
# latent - the latent Bayesian surprise (LBS) dynamics model
#
# The model has three parts, each an Mlp with a Gaussian output head:
#
#   prior       p(z' | s, a)        beliefs about the next latent state
#   posterior   q(z' | s, a, s')    beliefs after observing the next state
#   recon       p(s' | z')          next state reconstructed from the latent
#
# It is trained by maximizing the variational lower bound
#
#   E_q[log p(s' | z')] - beta KL(q || p)
#
# and rewards the agent with KL(q || p), the information the observed next
# state carries about the latent variable. Transitions whose outcome is
# pure noise carry no such information once the model has converged, so
# the reward vanishes on them, unlike prediction-error (surprisal) bonuses.
###########################################################################

Transition = namedtuple('Transition', ['state', 'action', 'next_state',
                                       'ext_reward', 'int_reward', 'done'])
Transition.__new__.__defaults__ = (0.0, 0.0, False)
Transition.__doc__ = """\
Single environment transition (*s*, *a*, *s'*) with the external and
intrinsic rewards and the episode-termination flag."""


class Transitions(object):
    """
    Batch of transitions stored as arrays with the batch along the first
    axis.

    Parameters
    ----------
    states : array_like
        shape (*n*, state_dim)
    actions : array_like
        shape (*n*, action_dim); use shape (*n*, 0) for tasks without actions
    next_states : array_like
        shape (*n*, state_dim)
    ext_rewards, int_rewards : array_like, optional
        shape (*n*,), zero if omitted
    dones : array_like, optional
        shape (*n*,), ``False`` if omitted
    """
    def __init__(self, states, actions, next_states, ext_rewards=None,
                 int_rewards=None, dones=None):
        self.states = np.atleast_2d(np.asarray(states, dtype=float))
        n = self.states.shape[0]
        actions = np.asarray(actions, dtype=float)
        if actions.size == 0:
            self.actions = np.zeros((n, 0))
        else:
            self.actions = actions.reshape(n, -1)
        self.next_states = np.atleast_2d(np.asarray(next_states, dtype=float))
        if self.next_states.shape != self.states.shape:
            raise ShapeError('States {} and next states {} shapes differ'
                             .format(self.states.shape,
                                     self.next_states.shape))
        if n == 0:
            raise ShapeError('Empty transition batch')

        def column(x, dtype):
            if x is None:
                return np.zeros(n, dtype=dtype)
            x = np.asarray(x, dtype=dtype).reshape(-1)
            if x.size != n:
                raise ShapeError('Got {} values for {} transitions'
                                 .format(x.size, n))
            return x

        self.ext_rewards = column(ext_rewards, float)
        self.int_rewards = column(int_rewards, float)
        self.dones = column(dones, bool)

    @classmethod
    def from_list(cls, transitions):
        """Stack a sequence of :class:`Transition`."""
        transitions = list(transitions)
        if not transitions:
            raise ShapeError('Empty transition batch')
        return cls([t.state for t in transitions],
                   [t.action for t in transitions],
                   [t.next_state for t in transitions],
                   [t.ext_reward for t in transitions],
                   [t.int_reward for t in transitions],
                   [t.done for t in transitions])

    def __len__(self):
        return self.states.shape[0]

    def __getitem__(self, index):
        """Sub-batch selected by an index array or slice."""
        return Transitions(self.states[index], self.actions[index],
                           self.next_states[index], self.ext_rewards[index],
                           self.int_rewards[index], self.dones[index])

    @property
    def state_dim(self):
        return self.states.shape[1]

    @property
    def action_dim(self):
        return self.actions.shape[1]


def as_transitions(batch):
    """
    Accept a :class:`Transitions` batch or a single :class:`Transition`
    (returned as a batch of one).
    """
    if isinstance(batch, Transitions):
        return batch
    if isinstance(batch, Transition):
        return Transitions.from_list([batch])
    raise TypeError('Expected Transition or Transitions, got {}'
                    .format(type(batch).__name__))


class LbsModel(dn.ModelBase):
    """
    Latent dynamics model emitting the latent Bayesian surprise reward.

    Parameters
    ----------
    state_dim : int
        dimension of the states
    action_dim : int
        dimension of the actions (0 for tasks without actions)
    latent_dim : int or None
        dimension of the latent variable; ``None`` (or 0) uses
        **state_dim**
    hidden : int
        width of the two hidden layers of the prior and posterior networks
    beta : float
        weight of the KL term in the training objective (≥ 0)
    activation : str
        ``'relu'`` or ``'leaky_relu'``
    recon_hidden : int
        width of a hidden layer in the reconstruction network; 0 (default)
        makes it a single linear layer
    recon_std : str
        ``'learned'`` (default): the reconstruction network also outputs
        (softplus) standard deviations; ``'unit'``: fixed unit standard
        deviation
    std_floor : float
        floor added to all softplus standard deviations
    lr : float
        Adam learning rate
    max_grad_norm : float or None
        gradient clipping threshold (``None`` for no clipping)
    init : str
        weight initialization, see :class:`~lbs.diffnum.Mlp`
    rng : numpy.random.Generator
        generator for the initial weights and the reparametrization noise
    """
    def __init__(self, state_dim, action_dim, latent_dim=None, hidden=32,
                 beta=0.1, activation='relu', recon_hidden=0,
                 recon_std='learned', std_floor=dn.STD_FLOOR, lr=3e-4,
                 max_grad_norm=None, init='uniform', rng=None):
        if beta < 0:
            raise ValueError('beta must be nonnegative, got {}'.format(beta))
        if recon_std not in ('learned', 'unit'):
            raise ValueError('Unknown recon_std "{}"'.format(recon_std))
        if rng is None:
            rng = np.random.default_rng()
        self.rng = rng
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.latent_dim = int(latent_dim or state_dim)
        self.beta = float(beta)
        self.recon_std = recon_std
        self.std_floor = std_floor

        S, A, L = self.state_dim, self.action_dim, self.latent_dim
        net = dict(activation=activation, init=init, rng=rng)
        self.prior_net = dn.Mlp([S + A, hidden, hidden, 2 * L],
                                name='prior', **net)
        self.posterior_net = dn.Mlp([S + A + S, hidden, hidden, 2 * L],
                                    name='posterior', **net)
        out = 2 * S if recon_std == 'learned' else S
        widths = [L, recon_hidden, out] if recon_hidden else [L, out]
        self.recon_net = dn.Mlp(widths, name='recon', **net)
        self.nets = (self.prior_net, self.posterior_net, self.recon_net)
        self.optimizer = dn.Adam(self.params, lr=lr,
                                 max_grad_norm=max_grad_norm)
        # terms of the last elbo_loss() evaluation
        self.last_terms = {}

    def _check(self, batch):
        batch = as_transitions(batch)
        if batch.state_dim != self.state_dim or \
           batch.action_dim != self.action_dim:
            raise ShapeError('Transitions with state/action dimensions '
                             '{}/{} for a model of {}/{}'.format(
                                 batch.state_dim, batch.action_dim,
                                 self.state_dim, self.action_dim))
        return batch

    def _head(self, out):
        return dn.split_gaussian_head(out, self.std_floor)

    def prior(self, batch):
        """Latent prior p(z' | s, a) for every transition of **batch**."""
        batch = self._check(batch)
        x = np.hstack([batch.states, batch.actions])
        return self._head(self.prior_net.forward(x))

    def posterior(self, batch):
        """Latent posterior q(z' | s, a, s') for every transition."""
        batch = self._check(batch)
        x = np.hstack([batch.states, batch.actions, batch.next_states])
        return self._head(self.posterior_net.forward(x))

    def reconstruct(self, z):
        """Distribution p(s' | z') of the next state given latent samples."""
        out = self.recon_net.forward(z)
        if self.recon_std == 'unit':
            return dn.DiagonalGaussian(out, np.ones(out.shape))
        return self._head(out)

    def _elbo_terms(self, batch, noise):
        batch = self._check(batch)
        q = self.posterior(batch)
        p = self.prior(batch)
        noise = np.asarray(noise, dtype=float).reshape(len(batch), -1)
        z = dn.reparam_sample(q, noise)
        log_lik = dn.gaussian_log_density(self.reconstruct(z),
                                          batch.next_states)
        kl = dn.kl_diag_gaussian(q, p)
        return log_lik, kl

    def elbo_loss(self, batch, noise):
        """
        Negative variational lower bound averaged over the batch.

        Parameters
        ----------
        batch : Transitions
            nonempty batch
        noise : numpy array
            standard-normal draws of shape (*n*, latent_dim), one
            reparametrized posterior sample per transition

        Returns
        -------
        loss : Node
            scalar ``-mean(log p(s'|z) - beta KL(q || p))``
        """
        log_lik, kl = self._elbo_terms(batch, noise)
        loss = -dn.mean(log_lik - self.beta * kl)
        check_finite(loss.value, 'ELBO loss')
        self.last_terms = {'reconstruction': -float(np.mean(log_lik.value)),
                           'kl': float(np.mean(kl.value))}
        return loss

    def surprisal(self, batch, noise=None):
        """
        Per-transition negative ELBO, an upper bound on the surprisal
        −log p(s' | s, a). Without **noise** the posterior mean is used as
        the latent sample.

        Returns
        -------
        r : numpy array
            shape (*n*,)
        """
        batch = self._check(batch)
        if noise is None:
            noise = np.zeros((len(batch), self.latent_dim))
        log_lik, kl = self._elbo_terms(batch, noise)
        return -(log_lik.value - self.beta * kl.value)

    def intrinsic_reward(self, batch):
        """
        Latent Bayesian surprise KL(q(z'|s,a,s') ‖ p(z'|s,a)), computed in
        closed form (no sampling).

        Parameters
        ----------
        batch : Transitions or Transition

        Returns
        -------
        r : numpy array or float
            shape (*n*,) for a batch, float for a single transition;
            always ≥ 0
        """
        single = isinstance(batch, Transition)
        batch = self._check(batch)
        x = np.hstack([batch.states, batch.actions])
        p = self._head(dn.Node(self.prior_net.evaluate(x)))
        x = np.hstack([x, batch.next_states])
        q = self._head(dn.Node(self.posterior_net.evaluate(x)))
        r = np.maximum(dn.kl_diag_gaussian(q, p).value, 0.0)
        return float(r[0]) if single else r

    reward = intrinsic_reward

    def train_step(self, batch):
        """
        One Adam step on :meth:`elbo_loss` with fresh reparametrization
        noise.

        Returns
        -------
        loss : float
            the loss before the step
        """
        batch = self._check(batch)
        noise = self.rng.standard_normal((len(batch), self.latent_dim))
        loss = self.elbo_loss(batch, noise)
        self.optimizer.minimize(loss)
        return float(loss.value)


class LbsSurprisalModel(LbsModel):
    """
    :class:`LbsModel` rewarding the per-transition negative ELBO
    (surprisal) instead of the KL divergence, for comparison.
    """
    def reward(self, batch):
        return self.surprisal(batch)


def prior_forward(m, s_t, a_t):
    """Latent prior of model **m** for the states and actions given."""
    return m.prior(Transitions(s_t, a_t, s_t))


def posterior_forward(m, s_t, a_t, s_next):
    """Latent posterior of model **m** for the transitions given."""
    return m.posterior(Transitions(s_t, a_t, s_next))


def elbo_loss(m, batch, noise):
    return m.elbo_loss(batch, noise)


def intrinsic_reward(m, t):
    return m.intrinsic_reward(t)


def train_step(m, minibatch):
    return m.train_step(minibatch)
