# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np

STD_FLOOR = 1e-8
STATE_CLIP = 10.0
REWARD_CLIP = 3.0


class RunningMoments(object):
    """
    Online mean and (population) variance with the numerically stable
    parallel-update recurrences; accumulators can be merged.

    Parameters
    ----------
    shape : tuple of int
        shape of one sample
    """
    def __init__(self, shape=()):
        self.shape = tuple(shape)
        self.count = 0
        self.mean = np.zeros(self.shape)
        self.m2 = np.zeros(self.shape)  # sum of squared deviations

    def _combine(self, count, mean, m2):
        total = self.count + count
        delta = mean - self.mean
        self.mean = self.mean + delta * count / total
        self.m2 = self.m2 + m2 + delta ** 2 * self.count * count / total
        self.count = total

    def update(self, x):
        """
        Add one sample (shape :attr:`shape`) or a batch of samples (shape
        (*n*,) + :attr:`shape`).
        """
        x = np.asarray(x, dtype=float)
        if x.shape == self.shape:
            x = x[np.newaxis]
        if x.shape[1:] != self.shape:
            raise ValueError('Sample shape {} does not match {}'
                             .format(x.shape[1:], self.shape))
        if x.shape[0] == 0:
            return self
        if x.shape[0] == 1:
            # Welford
            self.count += 1
            delta = x[0] - self.mean
            self.mean = self.mean + delta / self.count
            self.m2 = self.m2 + delta * (x[0] - self.mean)
        else:
            mean = x.mean(axis=0)
            self._combine(x.shape[0], mean, ((x - mean) ** 2).sum(axis=0))
        return self

    def merge(self, other):
        """New accumulator equivalent to both streams concatenated."""
        out = RunningMoments(self.shape)
        out.count, out.mean, out.m2 = self.count, self.mean, self.m2
        if other.count:
            out._combine(other.count, other.mean, other.m2)
        return out

    @property
    def var(self):
        return self.m2 / self.count if self.count else np.zeros(self.shape)

    @property
    def std(self):
        return np.sqrt(self.var)

    def state_dict(self):
        return {'count': np.array(self.count), 'mean': self.mean.copy(),
                'm2': self.m2.copy()}

    def load_state_dict(self, state):
        self.count = int(state['count'])
        self.mean = np.array(state['mean'], dtype=float)
        self.m2 = np.array(state['m2'], dtype=float)


def moments_update(m, x):
    return m.update(x)


def normalize_state(m, s, clip=STATE_CLIP):
    """
    Standardize states with running moments: (s − mean) / max(std, 1e−8),
    clipped to [−**clip**, **clip**].
    """
    z = (np.asarray(s, dtype=float) - m.mean) / np.maximum(m.std, STD_FLOOR)
    return np.clip(z, -clip, clip)


class ReturnNormalizer(object):
    """
    Scales rewards by the running standard deviation of the discounted
    return and clips them.

    Parameters
    ----------
    gamma : float
        discount of the return accumulator
    clip : float
        rewards are clipped to [−**clip**, **clip**]
    """
    def __init__(self, gamma=0.99, clip=REWARD_CLIP):
        self.gamma = gamma
        self.clip = clip
        self.ret = 0.0
        self.moments = RunningMoments()

    @property
    def std(self):
        """Return standard deviation (1 before two returns were seen)."""
        if self.moments.count < 2:
            return 1.0
        return max(float(self.moments.std), STD_FLOOR)

    def __call__(self, r, done):
        self.ret = self.gamma * self.ret + r
        self.moments.update(self.ret)
        out = np.clip(r / self.std, -self.clip, self.clip)
        if done:
            self.ret = 0.0
        return float(out)

    def normalize_rollout(self, rewards, dones):
        """:func:`normalize_reward` along a rollout."""
        return np.array([self(r, d) for r, d in zip(rewards, dones)])


def normalize_reward(rn, r, done):
    return rn(r, done)
