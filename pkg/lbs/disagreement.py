# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np

from . import diffnum as dn
from .latent import Transition, as_transitions
from .errors import ShapeError, check_finite


class EnsembleModel(dn.ModelBase):
    """
    Ensemble of forward-dynamics models; the variance of their next-state
    predictions is the curiosity signal.

    Members are initialized independently and each trains on its own
    bootstrap resample of every minibatch. They share no parameters.

    Parameters
    ----------
    state_dim, action_dim : int
        transition dimensions
    k : int
        number of members
    hidden : int
        hidden-layer width
    activation : str
        hidden-layer activation
    lr : float
        Adam learning rate of every member
    max_grad_norm : float or None
        gradient clipping threshold
    init : str
        weight initialization, see :class:`~lbs.diffnum.Mlp`
    rng : numpy.random.Generator
        generator for the initial weights and the bootstrap indices
    """
    def __init__(self, state_dim, action_dim, k=5, hidden=32,
                 activation='relu', lr=3e-4, max_grad_norm=None,
                 init='uniform', rng=None):
        if k < 1:
            raise ValueError('Ensemble needs at least one member, got {}'
                             .format(k))
        if rng is None:
            rng = np.random.default_rng()
        self.rng = rng
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        widths = [self.state_dim + self.action_dim, hidden, hidden,
                  self.state_dim]
        self.members = [dn.Mlp(widths, activation=activation, init=init,
                               rng=rng, name='member{}'.format(i))
                        for i in range(k)]
        self.nets = tuple(self.members)
        self.optimizers = [dn.Adam(m.params, lr=lr,
                                   max_grad_norm=max_grad_norm)
                           for m in self.members]

    @property
    def k(self):
        return len(self.members)

    def _inputs(self, batch):
        batch = as_transitions(batch)
        if batch.state_dim != self.state_dim or \
           batch.action_dim != self.action_dim:
            raise ShapeError('Transitions with state/action dimensions '
                             '{}/{} for an ensemble of {}/{}'.format(
                                 batch.state_dim, batch.action_dim,
                                 self.state_dim, self.action_dim))
        return batch, np.hstack([batch.states, batch.actions])

    def predictions(self, batch):
        """Member predictions, shape (k, *n*, state_dim)."""
        batch, x = self._inputs(batch)
        return np.stack([m.evaluate(x) for m in self.members])

    def intrinsic_reward(self, batch):
        """
        Population variance across members, averaged over state
        dimensions. Depends on (*s*, *a*) only.
        """
        single = isinstance(batch, Transition)
        r = np.mean(np.var(self.predictions(batch), axis=0), axis=1)
        return float(r[0]) if single else r

    reward = intrinsic_reward

    def train_step(self, batch):
        """
        One Adam step of every member on its forward MSE over an independent
        bootstrap resample of **batch**.

        Returns
        -------
        losses : list of float
            member losses before the step
        """
        batch, x = self._inputs(batch)
        n = len(batch)
        losses = []
        for i, (member, opt) in enumerate(zip(self.members,
                                              self.optimizers)):
            idx = self.rng.integers(0, n, n)
            loss = dn.mean(dn.square(member.forward(x[idx])
                                     - batch.next_states[idx]))
            check_finite(loss.value, 'ensemble member {} loss'.format(i))
            opt.minimize(loss)
            losses.append(float(loss.value))
        return losses


def disagreement_reward(m, t):
    return m.intrinsic_reward(t)


def disagreement_train_step(m, minibatch):
    return m.train_step(minibatch)
