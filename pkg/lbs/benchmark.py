# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from functools import partial
import platform
import sys
from timeit import Timer
from warnings import warn

import numpy as np

from . import intrinsic
from ._version import __version__
from .envs import sample_image_batch
from .tools.analytical import DeterministicToy


def _ensure_list(x):
    """
    Convert the argument to a list (a scalar becomes a single-element list).
    """
    return [x] if np.ndim(x) == 0 else list(x)


def time_call(func, batch, repeat=1, t_min=0.1, max_number=2 ** 20):
    """
    Time ``func(batch)``.

    The number of calls per loop is doubled until a loop lasts at least
    **t_min** seconds (the shorter loops also serve as warm-up), then the
    loop is run **repeat** times in total and the fastest one is kept.

    Parameters
    ----------
    func : callable
        a model's ``reward`` or ``train_step``
    batch : Transitions
        its argument
    repeat : int
        number of timed loops, at least 1
    t_min : float
        minimal loop duration in seconds
    max_number : int
        upper limit of calls per loop

    Returns
    -------
    per_call : float
        seconds per call in the fastest loop
    number : int
        calls per loop
    """
    if repeat < 1:
        raise ValueError('repeat must be positive, got {}'.format(repeat))
    timer = Timer(partial(func, batch))
    number = 1
    t = timer.timeit(number)
    while t < t_min and number < max_number:
        number *= 2
        t = timer.timeit(number)
    loops = [t] + timer.repeat(repeat - 1, number)
    return min(loops) / number, number


class CuriosityTiming(object):
    """
    Benchmark the computational cost of the intrinsic-reward methods:
    reward evaluation and one training step on a batch of transitions.

    Parameters
    ----------
    n : int or sequence of int
        batch size(s)
    select : str or sequence of str
        methods to benchmark. Use ``'all'`` (default) for all available or
        choose any combination of :data:`lbs.intrinsic.METHODS`
    state_dim, action_dim : int
        transition dimensions (Mountain Car: 2 and 1)
    repeat : int
        timed loops per measurement (the fastest is kept)
    t_min : float
        minimal duration of a timed loop in seconds
    seed : int
        seed of the models and the transitions
    verbose : boolean
        determines whether benchmark progress should be reported (to stderr)

    Attributes
    ----------
    n : list of int
        batch sizes, sorted in ascending order
    methods : list of str
        benchmarked methods
    reward, train : dict of list of float
        milliseconds per call by method, one entry per batch size

    Notes
    -----
    ``print(CuriosityTiming(...))`` shows a table with a row per method and
    a reward/train column pair per batch size.
    """
    def __init__(self, n=[128, 2048], select='all', state_dim=2,
                 action_dim=1, repeat=1, t_min=0.1, seed=0, verbose=True):
        self.n = sorted(int(ni) for ni in _ensure_list(n))
        select = _ensure_list(select)
        self.verbose = verbose

        if 'all' in select:
            methods = list(intrinsic.METHODS)
        else:
            methods = []
            for method in select:
                if method not in intrinsic.METHODS:
                    warn('Unsupported method "{}" ignored!'.format(method),
                         SyntaxWarning, stacklevel=2)
                else:
                    methods.append(method)
        if not methods:
            raise ValueError('At least one valid method must be specified!')
        self.methods = methods

        self.reward = {method: [] for method in methods}
        self.train = {method: [] for method in methods}

        rng = np.random.default_rng(seed)
        for ni in self.n:
            batch = DeterministicToy(ni, rng, state_dim,
                                     action_dim).transitions
            for method in methods:
                model = intrinsic.make_model(method, state_dim, action_dim,
                                             np.random.default_rng(seed))
                for kind, func in [('reward', model.reward),
                                   ('train', model.train_step)]:
                    per_call, number = time_call(func, batch, repeat, t_min)
                    getattr(self, kind)[method].append(per_call * 1000)
                    self._vprint('n = {:<6} {:<13} {:<6} {:10.3f} ms '
                                 '({} calls/loop)'.format(
                                     ni, method, kind, per_call * 1000,
                                     number))

    def _vprint(self, *args, **kwargs):
        """
        Print to stderr, only if verbose=True.
        """
        if self.verbose:
            print(*args, file=sys.stderr, **kwargs)
            sys.stderr.flush()

    def __repr__(self):
        col = 10
        name_width = max(len('method'), *(len(m) for m in self.methods))
        lead = ' ' * name_width
        groups = lead + ''.join(
            '  {:^{w}}'.format('n = {}'.format(ni), w=2 * col)
            for ni in self.n)
        header = '{:<{w}}'.format('method', w=name_width) + \
            '  {:>{c}}{:>{c}}'.format('reward', 'train', c=col) * len(self.n)
        rule = '-' * len(header)
        out = ['PyLBS {} intrinsic-reward cost on {}'.format(
                   __version__, platform.processor() or platform.machine()),
               'milliseconds per call', '', groups, header, rule]
        for method in self.methods:
            cells = ''.join('  {:>{c}.3f}{:>{c}.3f}'.format(r, t, c=col)
                            for r, t in zip(self.reward[method],
                                            self.train[method]))
            out.append('{:<{w}}'.format(method, w=name_width) + cells)
        return '\n'.join(out)


def reward_ratio(model, dataset, rng, n_eval=512):
    """
    Ratio of the mean intrinsic reward on stochastic transitions (from
    1-images) to that on deterministic transitions (from 0-images) of the
    image task.

    Parameters
    ----------
    model : intrinsic-reward model
        anything with a ``reward(batch)`` method
    dataset : LabeledImages
        image set with all digit classes
    rng : numpy.random.Generator
        source of the evaluation transitions
    n_eval : int
        number of transitions of each kind

    Returns
    -------
    ratio : float
        ``inf`` (with a warning) if the mean reward on 0-images is 0
    """
    stochastic = sample_image_batch(dataset, rng, n_eval, source=1)
    deterministic = sample_image_batch(dataset, rng, n_eval, source=0)
    num = float(np.mean(model.reward(stochastic.transitions)))
    den = float(np.mean(model.reward(deterministic.transitions)))
    if den == 0:
        warn('Zero mean intrinsic reward on deterministic transitions, '
             'reward ratio is infinite', RuntimeWarning, stacklevel=2)
        return np.inf
    return num / den
