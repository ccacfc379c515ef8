# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np

from . import diffnum as dn
from .latent import Transition, as_transitions
from .errors import ShapeError, check_finite

###########################################################################
# icm - Intrinsic Curiosity Module
#
# A feature network f embeds states; a forward network predicts f(s') from
# (f(s), a) and its squared error is the curiosity reward. Features are
# shaped only by an inverse-dynamics network that predicts the (continuous)
# action from (f(s), f(s')): the forward loss does not reach f.
###########################################################################


class IcmModel(dn.ModelBase):
    """
    Intrinsic Curiosity Module for low-dimensional states.

    Parameters
    ----------
    state_dim, action_dim : int
        transition dimensions (without actions, the inverse network is
        omitted)
    feature_dim : int or None
        dimension of the features; ``None`` (or 0) uses **state_dim**
    hidden : int
        hidden-layer width
    activation : str
        hidden-layer activation
    inverse_weight : float
        weight of the inverse-dynamics loss
    lr : float
        Adam learning rate
    max_grad_norm : float or None
        gradient clipping threshold
    init : str
        weight initialization, see :class:`~lbs.diffnum.Mlp`
    rng : numpy.random.Generator
        generator for the initial weights
    """
    def __init__(self, state_dim, action_dim, feature_dim=None, hidden=32,
                 activation='relu', inverse_weight=1.0, lr=3e-4,
                 max_grad_norm=None, init='uniform', rng=None):
        if rng is None:
            rng = np.random.default_rng()
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.feature_dim = F = int(feature_dim or state_dim)
        self.inverse_weight = inverse_weight
        net = dict(activation=activation, init=init, rng=rng)
        self.feature_net = dn.Mlp([self.state_dim, hidden, F],
                                  name='feature', **net)
        self.forward_net = dn.Mlp([F + self.action_dim, hidden, hidden, F],
                                  name='forward', **net)
        nets = [self.feature_net, self.forward_net]
        if self.action_dim:
            self.inverse_net = dn.Mlp([2 * F, hidden, hidden,
                                       self.action_dim],
                                      name='inverse', **net)
            nets.append(self.inverse_net)
        else:
            self.inverse_net = None
        self.nets = tuple(nets)
        self.optimizer = dn.Adam(self.params, lr=lr,
                                 max_grad_norm=max_grad_norm)

    def _check(self, batch):
        batch = as_transitions(batch)
        if batch.state_dim != self.state_dim or \
           batch.action_dim != self.action_dim:
            raise ShapeError('Transitions with state/action dimensions '
                             '{}/{} for an ICM of {}/{}'.format(
                                 batch.state_dim, batch.action_dim,
                                 self.state_dim, self.action_dim))
        return batch

    def intrinsic_reward(self, batch):
        """
        Forward-model error in feature space,
        ‖φ̂(s') − f(s')‖² / feature_dim.
        """
        single = isinstance(batch, Transition)
        batch = self._check(batch)
        phi = self.feature_net.evaluate(batch.states)
        phi_next = self.feature_net.evaluate(batch.next_states)
        pred = self.forward_net.evaluate(np.hstack([phi, batch.actions]))
        r = np.mean((pred - phi_next) ** 2, axis=1)
        return float(r[0]) if single else r

    reward = intrinsic_reward

    def losses(self, batch):
        """
        Forward and inverse-dynamics losses (recorded).

        Returns
        -------
        forward, inverse : Node
            scalar losses; **inverse** is a constant 0 without actions
        """
        batch = self._check(batch)
        phi = self.feature_net.forward(batch.states)
        phi_next = self.feature_net.forward(batch.next_states)
        pred = self.forward_net.forward(
            dn.concat([dn.detach(phi), batch.actions]))
        forward = dn.mean(dn.square(pred - dn.detach(phi_next)))
        if self.inverse_net is None:
            inverse = dn.Node(0.0)
        else:
            a_hat = self.inverse_net.forward(dn.concat([phi, phi_next]))
            inverse = dn.mean(dn.square(a_hat - batch.actions))
        return forward, inverse

    def train_step(self, batch):
        """
        One Adam step on forward + inverse_weight · inverse loss.

        Returns
        -------
        losses : dict
            ``'forward'`` and ``'inverse'`` losses before the step
        """
        forward, inverse = self.losses(batch)
        total = forward + self.inverse_weight * inverse
        check_finite(total.value, 'ICM loss')
        self.optimizer.minimize(total)
        return {'forward': float(forward.value),
                'inverse': float(inverse.value)}


def icm_reward(m, t):
    return m.intrinsic_reward(t)


def icm_train_step(m, minibatch):
    return m.train_step(minibatch)
