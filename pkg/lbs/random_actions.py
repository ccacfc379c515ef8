# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np

from .latent import Transition, as_transitions

# The "random" exploration baseline is not a reward: the agent simply takes
# uniformly random actions and never learns.


def random_bonus():
    """Intrinsic reward of the random baseline (always 0)."""
    return 0.0


class RandomModel(object):
    """
    Placeholder intrinsic-reward model of the random baseline, so that it
    plugs into the same experiment loop as the learned methods.
    """
    params = []
    optimizer = None

    def intrinsic_reward(self, batch):
        if isinstance(batch, Transition):
            return random_bonus()
        return np.full(len(as_transitions(batch)), random_bonus())

    reward = intrinsic_reward

    def train_step(self, batch):
        return 0.0

    def state_dict(self):
        return {}

    def load_state_dict(self, state):
        pass


class UniformPolicy(object):
    """
    Policy drawing actions uniformly from the action box.

    Parameters
    ----------
    low, high : array_like
        bounds of the action box (per dimension)
    """
    def __init__(self, low, high):
        self.low = np.asarray(low, dtype=float)
        self.high = np.asarray(high, dtype=float)
        if self.low.shape != self.high.shape or \
           np.any(self.high <= self.low):
            raise ValueError('Incorrect action box [{}, {}]'
                             .format(low, high))
        self._logp = -np.sum(np.log(self.high - self.low))

    def act(self, state, rng):
        """
        Returns
        -------
        action : numpy array
        logp : float
            log density of the uniform distribution
        value : float
            0 (no critic)
        """
        return rng.uniform(self.low, self.high), self._logp, 0.0
