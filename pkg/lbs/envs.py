# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import os
from collections import namedtuple
from warnings import warn

import numpy as np

from .errors import ConfigError, DatasetError
from .latent import Transitions
from .tools import io
from .tools.analytical import SyntheticDigits

###########################################################################
# envs - benchmark environments
#
# Mountain Car (classic continuous dynamics), its stochastic variants with
# a remote-controlled noise source, and the stochastic image-transition
# task built from MNIST digits.
###########################################################################

MIN_POSITION = -1.2
MAX_POSITION = 0.6
MAX_SPEED = 0.07
GOAL_POSITION = 0.45
POWER = 0.0015
GRAVITY = 0.0025

MountainCarState = namedtuple('MountainCarState', ['position', 'velocity'])

StochMountainCarState = namedtuple('StochMountainCarState',
                                   ['original', 'noisy'])

VARIANTS = ('frozen', 'evolving')


def _clamp(x, low, high):
    return min(max(x, low), high)


def mc_step(s, force):
    """
    One step of continuous Mountain Car. Position and velocity are clamped
    to their ranges; the velocity is kept when the car hits the left wall.

    Parameters
    ----------
    s : MountainCarState
        current state
    force : float
        applied force, clamped to [−1, 1]

    Returns
    -------
    next_state : MountainCarState
    reward : float
        classic task reward −0.1 · force², plus 100 on reaching the goal
    done : bool
        goal reached (position ≥ 0.45)
    """
    force = _clamp(float(force), -1.0, 1.0)
    v = s.velocity + force * POWER - GRAVITY * np.cos(3 * s.position)
    v = _clamp(v, -MAX_SPEED, MAX_SPEED)
    p = _clamp(s.position + v, MIN_POSITION, MAX_POSITION)
    done = bool(p >= GOAL_POSITION)
    reward = -0.1 * force ** 2 + (100.0 if done else 0.0)
    return MountainCarState(p, v), reward, done


def smc_step(s, force, remote, variant, rng):
    """
    One step of stochastic Mountain Car.

    The second action dimension is a remote: when positive, the noisy state
    is redrawn from U[−1, 1] and the car either stays where it is
    (``'frozen'``) or moves without applied force (``'evolving'``).
    Otherwise the car follows :func:`mc_step` and the noisy state keeps its
    value.

    Parameters
    ----------
    s : StochMountainCarState
        current state
    force, remote : float
        actions, clamped to [−1, 1]
    variant : str
        ``'frozen'`` or ``'evolving'``
    rng : numpy.random.Generator
        source of the noise

    Returns
    -------
    next_state : StochMountainCarState
    reward : float
    done : bool
    """
    if variant not in VARIANTS:
        raise ConfigError('Unknown stochastic Mountain Car variant "{}"'
                          .format(variant))
    force = _clamp(float(force), -1.0, 1.0)
    remote = _clamp(float(remote), -1.0, 1.0)
    if remote <= 0:
        original, reward, done = mc_step(s.original, force)
        return StochMountainCarState(original, s.noisy), reward, done

    noisy = rng.uniform(-1.0, 1.0)
    if variant == 'frozen':
        original = s.original
        done = bool(original.position >= GOAL_POSITION)
        reward = -0.1 * force ** 2 + (100.0 if done else 0.0)
    else:
        original, reward, done = mc_step(s.original, 0.0)
    return StochMountainCarState(original, noisy), reward, done


def mc_reset(rng, stochastic=False):
    """
    Initial state: position ~ U[−0.6, −0.4], velocity 0 (and noisy state 0
    for the stochastic variants).
    """
    s = MountainCarState(rng.uniform(-0.6, -0.4), 0.0)
    return StochMountainCarState(s, 0.0) if stochastic else s


class MountainCarEnv(object):
    """
    Continuous Mountain Car with array observations (position, velocity).

    Parameters
    ----------
    rng : numpy.random.Generator
        generator owned by the environment
    episode_steps : int
        episode horizon; reaching it ends the episode like the goal does
    """
    state_dim = 2
    action_dim = 1
    # (low, high) of the state dimensions used for coverage
    coverage_ranges = ((MIN_POSITION, MAX_POSITION), (-MAX_SPEED, MAX_SPEED))

    def __init__(self, rng, episode_steps=1000):
        self.rng = rng
        self.episode_steps = int(episode_steps)
        self.action_low = -np.ones(self.action_dim)
        self.action_high = np.ones(self.action_dim)
        self.state = None
        self.t = 0

    def reset(self):
        self.state = mc_reset(self.rng)
        self.t = 0
        return self.observe()

    def observe(self):
        return np.array(self.state, dtype=float)

    def _transition(self, action):
        return mc_step(self.state, action[0])

    def step(self, action):
        """
        Returns
        -------
        obs : numpy array
            next observation
        reward : float
            external reward
        done : bool
            goal reached or horizon exhausted
        """
        action = np.clip(np.asarray(action, dtype=float).reshape(-1),
                         self.action_low, self.action_high)
        self.state, reward, done = self._transition(action)
        self.t += 1
        return self.observe(), reward, done or self.t >= self.episode_steps

    @staticmethod
    def coverage_point(obs):
        """(position, velocity) of an observation."""
        return obs[:2]


class StochasticMountainCarEnv(MountainCarEnv):
    """
    Mountain Car with the remote-controlled noisy state; observations are
    (position, velocity, noisy) and actions (force, remote).

    Parameters
    ----------
    rng : numpy.random.Generator
        generator owned by the environment (initial states and noise)
    variant : str
        ``'frozen'`` or ``'evolving'``
    episode_steps : int
        episode horizon
    """
    state_dim = 3
    action_dim = 2

    def __init__(self, rng, variant, episode_steps=1000):
        if variant not in VARIANTS:
            raise ConfigError('Unknown stochastic Mountain Car variant "{}"'
                              .format(variant))
        super(StochasticMountainCarEnv, self).__init__(rng, episode_steps)
        self.variant = variant

    def reset(self):
        self.state = mc_reset(self.rng, stochastic=True)
        self.t = 0
        return self.observe()

    def observe(self):
        return np.array(tuple(self.state.original) + (self.state.noisy,),
                        dtype=float)

    def _transition(self, action):
        return smc_step(self.state, action[0], action[1], self.variant,
                        self.rng)


CONTROL_ENVS = {
    'mountain-car': lambda rng, steps: MountainCarEnv(rng, steps),
    'smc-frozen': lambda rng, steps: StochasticMountainCarEnv(rng, 'frozen',
                                                              steps),
    'smc-evolving': lambda rng, steps: StochasticMountainCarEnv(
        rng, 'evolving', steps),
}

IMAGE_ENVS = ('stochastic-image',)

STOCHASTIC_ENVS = ('smc-frozen', 'smc-evolving', 'stochastic-image')


def make_env(env_id, rng, episode_steps=1000):
    """Control environment by id (see :data:`CONTROL_ENVS`)."""
    if env_id not in CONTROL_ENVS:
        raise ConfigError('Unknown control environment "{}", use one of {}'
                          .format(env_id, sorted(CONTROL_ENVS)))
    return CONTROL_ENVS[env_id](rng, episode_steps)


class LabeledImages(object):
    """
    Labeled image set with flattened images scaled to [0, 1].

    Parameters
    ----------
    images : numpy array
        shape (*n*, height, width)
    labels : numpy array
        shape (*n*,)
    synthetic : bool
        the images come from the synthetic glyph generator
    """
    def __init__(self, images, labels, synthetic=False):
        images = np.asarray(images, dtype=float)
        self.shape = images.shape[1:]
        self.images = images.reshape(images.shape[0], -1)
        self.labels = np.asarray(labels).astype(int)
        if self.labels.shape != (self.images.shape[0],):
            raise DatasetError('{} labels for {} images'
                               .format(self.labels.size, self.images.shape[0]))
        self.synthetic = synthetic
        self.by_label = {c: np.flatnonzero(self.labels == c)
                         for c in np.unique(self.labels)}

    def __len__(self):
        return self.images.shape[0]

    @property
    def dim(self):
        return self.images.shape[1]

    def require_classes(self, classes):
        missing = [c for c in classes if c not in self.by_label]
        if missing:
            raise DatasetError('Dataset has no images of digit(s) {}'
                               .format(missing))

    def sample(self, labels, rng):
        """A random image index for each requested label."""
        labels = np.asarray(labels)
        idx = np.empty(labels.size, dtype=int)
        for c in np.unique(labels):
            where = labels == c
            idx[where] = rng.choice(self.by_label[c], np.count_nonzero(where))
        return idx


ImageBatch = namedtuple('ImageBatch', ['transitions', 'source_labels',
                                       'target_labels'])


def sample_image_batch(dataset, rng, n=128, source=None):
    """
    Batch of stochastic image-task transitions.

    A 0-image always transitions to a 1-image; a 1-image transitions to an
    image of a digit drawn uniformly from 2–9. The task has no actions (the
    action vectors are empty).

    Parameters
    ----------
    dataset : LabeledImages
        must contain all ten digit classes
    rng : numpy.random.Generator
        source of the samples
    n : int
        batch size
    source : int or None
        source digit (0 or 1) of all transitions; ``None`` draws it
        uniformly per transition

    Returns
    -------
    batch : ImageBatch
        ``transitions`` (states = source images, next states = target
        images), ``source_labels``, ``target_labels``
    """
    dataset.require_classes(range(10))
    if source is None:
        src = rng.integers(0, 2, n)
    elif source in (0, 1):
        src = np.full(n, source)
    else:
        raise ValueError('Source digit must be 0, 1 or None, got {}'
                         .format(source))
    tgt = np.where(src == 0, 1, rng.integers(2, 10, n))
    s = dataset.images[dataset.sample(src, rng)]
    s_next = dataset.images[dataset.sample(tgt, rng)]
    return ImageBatch(Transitions(s, np.zeros((n, 0)), s_next), src, tgt)


MNIST_FILES = ('t10k-images-idx3-ubyte', 't10k-labels-idx1-ubyte')


def _find(data_dir, name):
    for candidate in (name, name + '.gz'):
        path = os.path.join(data_dir, candidate)
        if os.path.exists(path):
            return path
    return None


def load_image_dataset(data_dir=None, pool=True, rng=None, synthetic_n=10000):
    """
    MNIST test split from **data_dir** (see
    :func:`lbs.tools.io.get_data_dir`), optionally pooled to 14×14.

    If the IDX files are absent, synthetic digit glyphs are generated
    instead (with a warning) and the returned set is flagged
    ``synthetic``.

    Parameters
    ----------
    data_dir : str or None
        directory with ``t10k-images-idx3-ubyte`` and
        ``t10k-labels-idx1-ubyte`` (optionally gzipped); ``None`` or ``''``
        for the default location
    pool : bool
        2×2 mean pooling
    rng : numpy.random.Generator
        generator for the synthetic fallback
    synthetic_n : int
        size of the synthetic fallback set

    Returns
    -------
    dataset : LabeledImages
    """
    if not data_dir:
        data_dir = io.get_data_dir()
    paths = [_find(data_dir, name) for name in MNIST_FILES]
    if None in paths:
        warn('MNIST files not found in "{}", using synthetic digit glyphs'
             .format(data_dir), UserWarning, stacklevel=2)
        if rng is None:
            rng = np.random.default_rng(0)
        glyphs = SyntheticDigits(synthetic_n, rng)
        images = glyphs.images
        if pool:
            images = io.pool2x2(images)
        return LabeledImages(images, glyphs.labels, synthetic=True)

    images, labels = io.load_labeled_idx(paths[0], paths[1], pool=pool)
    return LabeledImages(images, labels)
