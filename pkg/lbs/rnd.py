# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np

from . import diffnum as dn
from .latent import Transition, as_transitions
from .errors import ShapeError, check_finite


class RndModel(dn.ModelBase):
    """
    Random Network Distillation: a predictor network is trained to match a
    fixed, randomly initialized target network on visited states; its error
    on the next state is the novelty bonus.

    Parameters
    ----------
    state_dim : int
        state dimension
    feature_dim : int or None
        output dimension of both networks; ``None`` (or 0) uses
        **state_dim**
    hidden : int
        hidden-layer width
    activation : str
        hidden-layer activation
    lr : float
        Adam learning rate of the predictor
    max_grad_norm : float or None
        gradient clipping threshold
    init : str
        weight initialization, see :class:`~lbs.diffnum.Mlp`
    rng : numpy.random.Generator
        generator for the initial weights
    """
    def __init__(self, state_dim, feature_dim=None, hidden=32,
                 activation='relu', lr=3e-4, max_grad_norm=None,
                 init='uniform', rng=None):
        if rng is None:
            rng = np.random.default_rng()
        self.state_dim = int(state_dim)
        self.feature_dim = F = int(feature_dim or state_dim)
        net = dict(activation=activation, init=init, rng=rng)
        widths = [self.state_dim, hidden, hidden, F]
        self.target_net = dn.Mlp(widths, name='target', **net)
        self.predictor_net = dn.Mlp(widths, name='predictor', **net)
        self.nets = (self.predictor_net, self.target_net)
        # the target is never updated
        self.optimizer = dn.Adam(self.predictor_net.params, lr=lr,
                                 max_grad_norm=max_grad_norm)

    def _next_states(self, batch):
        batch = as_transitions(batch)
        if batch.state_dim != self.state_dim:
            raise ShapeError('States of dimension {} for an RND of {}'
                             .format(batch.state_dim, self.state_dim))
        return batch.next_states

    def intrinsic_reward(self, batch):
        """Distillation error ‖predictor(s') − target(s')‖² / feature_dim."""
        single = isinstance(batch, Transition)
        s = self._next_states(batch)
        err = self.predictor_net.evaluate(s) - self.target_net.evaluate(s)
        r = np.mean(err ** 2, axis=1)
        return float(r[0]) if single else r

    reward = intrinsic_reward

    def train_step(self, batch):
        """
        One Adam step of the predictor on the distillation MSE.

        Returns
        -------
        loss : float
            the loss before the step (equal to the mean reward of the batch)
        """
        s = self._next_states(batch)
        target = self.target_net.evaluate(s)
        loss = dn.mean(dn.square(self.predictor_net.forward(s) - target))
        check_finite(loss.value, 'RND loss')
        self.optimizer.minimize(loss)
        return float(loss.value)


def rnd_reward(m, t):
    return m.intrinsic_reward(t)


def rnd_train_step(m, minibatch):
    return m.train_step(minibatch)
