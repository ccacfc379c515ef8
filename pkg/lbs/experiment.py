# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import csv
import io as _io
import json
import os
import sys
from timeit import default_timer as timer

import numpy as np

from ._version import __version__
from .benchmark import reward_ratio
from .config import ExperimentConfig
from .envs import make_env, load_image_dataset, sample_image_batch
from .errors import NumericalError
from .intrinsic import make_model
from .latent import Transitions
from .policy import (ActorCritic, RolloutBuffer, combine_rewards,
                     gae_advantages, ppo_update)
from .random_actions import UniformPolicy
from .tools.coverage import CoverageGrid
from .tools.io import save_checkpoint
from .tools.math import minibatch_indices
from .tools.normalize import RunningMoments, ReturnNormalizer, \
    normalize_state

###########################################################################
# experiment - seeded end-to-end exploration runs
#
# Control tasks (Mountain Car and its stochastic variants): the agent
# collects a rollout, the intrinsic-reward model scores it with its
# pre-update parameters, rewards are combined and normalized, then the
# policy (PPO) and the model are trained on the same schedule, and the
# cumulative state-space coverage is logged.
#
# Image task: the model is trained on random batches of image transitions
# and the reward ratio between stochastic and deterministic transitions is
# logged.
#
# All randomness comes from one seed; wall-clock time is kept out of
# progress.csv, so re-runs reproduce it byte for byte.
###########################################################################

CSV_HEADER = ('step', 'metric', 'value', 'seed', 'config_hash')


def _vprint(verbose, *args, **kwargs):
    """
    Print to stderr, only if verbose=True.
    """
    if verbose:
        print(*args, file=sys.stderr, **kwargs)
        sys.stderr.flush()


def _loss_value(loss):
    """Scalar summary of what a model's train_step() returned."""
    if isinstance(loss, dict):
        return float(sum(loss.values()))
    return float(np.mean(loss))


class RunRecord(object):
    """
    Progress of one run: (step, metric, value) rows plus a summary.

    Parameters
    ----------
    cfg : ExperimentConfig
        configuration of the run

    Attributes
    ----------
    rows : list of tuple
        (step, metric, value); steps increase strictly for every metric
    status : str
        ``'running'``, ``'ok'`` or ``'failed'``
    summary : dict
        final metrics and run information (see :meth:`summary_dict`)
    """
    def __init__(self, cfg):
        self.cfg = cfg
        self.config_hash = cfg.config_hash()
        self.seed = cfg.seed
        self.rows = []
        self.status = 'running'
        self.error = ''
        self.wall_clock = 0.0
        self.info = {}
        self._last = {}

    def add(self, step, metric, value):
        step = int(step)
        if step <= self._last.get(metric, -1):
            raise ValueError('Steps of "{}" must increase: {} after {}'
                             .format(metric, step, self._last[metric]))
        self._last[metric] = step
        self.rows.append((step, metric, float(value)))

    def metric(self, name):
        """Steps and values of one metric as arrays."""
        rows = [(s, v) for s, m, v in self.rows if m == name]
        if not rows:
            return np.zeros(0, dtype=int), np.zeros(0)
        steps, values = zip(*rows)
        return np.array(steps), np.array(values)

    def final(self):
        """Last value of every metric."""
        out = {}
        for step, metric, value in self.rows:
            out[metric] = value
        return out

    def to_csv(self):
        f = _io.StringIO()
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for step, metric, value in self.rows:
            writer.writerow((step, metric, repr(value), self.seed,
                             self.config_hash))
        return f.getvalue()

    def summary_dict(self):
        steps = max([s for s, m, v in self.rows] or [0])
        return {
            'env': self.cfg.env,
            'method': self.cfg.method,
            'seed': self.seed,
            'config_hash': self.config_hash,
            'config': self.cfg.as_dict(),
            'status': self.status,
            'error': self.error,
            'steps': steps,
            'final': self.final(),
            'wall_clock_seconds': self.wall_clock,
            'version': __version__,
            'info': self.info,
        }

    def write(self, out_dir):
        """Write ``progress.csv``, ``summary.json`` and ``config.txt``."""
        if not os.path.exists(out_dir):
            os.makedirs(out_dir)
        with open(os.path.join(out_dir, 'progress.csv'), 'w') as f:
            f.write(self.to_csv())
        with open(os.path.join(out_dir, 'summary.json'), 'w') as f:
            json.dump(self.summary_dict(), f, indent=2, sort_keys=True,
                      allow_nan=True)
            f.write('\n')
        with open(os.path.join(out_dir, 'config.txt'), 'w') as f:
            f.write(self.cfg.to_text())


def _generators(seed, n):
    """Independent generators derived from one seed."""
    return [np.random.default_rng(s)
            for s in np.random.SeedSequence(seed).spawn(n)]


def _train_model(model, batch, cfg, rng):
    """Model updates on the schedule of the policy; mean loss."""
    losses = []
    for epoch in range(cfg.epochs):
        for idx in minibatch_indices(len(batch), cfg.minibatches, rng):
            losses.append(_loss_value(model.train_step(batch[idx])))
    return float(np.mean(losses))


def _run_control(cfg, record, out_dir, verbose):
    env_rng, policy_rng, model_rng, batch_rng = _generators(cfg.seed, 4)
    env = make_env(cfg.env, env_rng, cfg.episode_steps)
    S, A = env.state_dim, env.action_dim
    model = make_model(cfg.method, S, A, model_rng, **cfg.model_options())
    random = cfg.method == 'random'
    if random:
        policy = UniformPolicy(env.action_low, env.action_high)
    else:
        policy = ActorCritic(S, A, cfg.policy_hidden,
                             cfg.state_dependent_std, lr=cfg.lr,
                             max_grad_norm=cfg.max_grad_norm or None,
                             rng=policy_rng)

    obs_moments = RunningMoments((S,))
    reward_norm = ReturnNormalizer(cfg.gamma)
    grid = CoverageGrid(env.coverage_ranges)
    buf = RolloutBuffer(cfg.horizon, S, A)

    obs = env.reset()
    obs_moments.update(obs)
    grid.update(env.coverage_point(obs))
    steps = 0
    episodes = 0
    while steps < cfg.steps:
        buf.reset()
        n = min(cfg.horizon, cfg.steps - steps)
        for i in range(n):
            x = normalize_state(obs_moments, obs)
            action, logp, value = policy.act(x, policy_rng)
            next_obs, r_e, done = env.step(action)
            buf.add(x, obs, action, logp, value, r_e, done, next_obs)
            grid.update(env.coverage_point(next_obs))
            obs_moments.update(next_obs)
            obs = next_obs
            if done:
                episodes += 1
                obs = env.reset()
                obs_moments.update(obs)
                grid.update(env.coverage_point(obs))
        steps += n

        if not random:
            buf.last_value = float(
                policy.v_net.evaluate(normalize_state(obs_moments, obs))[0])

        # model inputs: states normalized with the end-of-rollout
        # statistics, actions as executed
        batch = Transitions(
            normalize_state(obs_moments, buf.states[:n]),
            np.clip(buf.actions[:n], env.action_low, env.action_high),
            normalize_state(obs_moments, buf.next_states[:n]),
            buf.ext_rewards[:n], None, buf.dones[:n])
        r_i = model.reward(batch)
        buf.int_rewards[:n] = r_i
        combined = combine_rewards(buf.ext_rewards[:n], r_i, cfg.eta_e,
                                   cfg.eta_i)
        buf.rewards[:n] = reward_norm.normalize_rollout(combined,
                                                        buf.dones[:n])

        record.add(steps, 'coverage', grid.coverage)
        record.add(steps, 'intrinsic_reward', np.mean(r_i))
        if not random:
            gae_advantages(buf, cfg.gamma, cfg.lam)
            losses = ppo_update(policy, buf, batch_rng, cfg.clip,
                                cfg.epochs, cfg.minibatches, cfg.vf_coef,
                                cfg.ent_coef)
            record.add(steps, 'model_loss',
                       _train_model(model, batch, cfg, batch_rng))
            record.add(steps, 'policy_loss', losses['policy'])
            record.add(steps, 'value_loss', losses['value'])
            record.add(steps, 'entropy', losses['entropy'])
        _vprint(verbose, '{:>9} steps  coverage {:6.2f}%  episodes {}'
                .format(steps, grid.coverage, episodes))

    record.info['episodes'] = episodes
    record.info['visits'] = grid.counts.tolist()
    if out_dir and not random:
        h = record.config_hash
        save_checkpoint(os.path.join(out_dir, 'model.npz'),
                        model.state_dict(), h, cfg.method)
        state = policy.state_dict()
        for key, value in obs_moments.state_dict().items():
            state['obs_moments.' + key] = value
        save_checkpoint(os.path.join(out_dir, 'policy.npz'), state, h,
                        'ppo')


def _run_image(cfg, record, out_dir, verbose):
    data_rng, model_rng, batch_rng, eval_rng = _generators(cfg.seed, 4)
    dataset = load_image_dataset(cfg.data_dir or None, cfg.pool,
                                 rng=data_rng)
    record.info['synthetic_dataset'] = dataset.synthetic
    model = make_model(cfg.method, dataset.dim, 0, model_rng,
                       **cfg.model_options())
    losses = []
    for b in range(1, cfg.batches + 1):
        batch = sample_image_batch(dataset, batch_rng, cfg.batch_size)
        losses.append(_loss_value(model.train_step(batch.transitions)))
        if b % cfg.ratio_every == 0 or b == cfg.batches:
            ratio = reward_ratio(model, dataset, eval_rng, cfg.n_eval)
            record.add(b, 'reward_ratio', ratio)
            record.add(b, 'model_loss', np.mean(losses))
            losses = []
            _vprint(verbose, '{:>9} batches  reward ratio {:.4f}'
                    .format(b, ratio))
    if out_dir:
        save_checkpoint(os.path.join(out_dir, 'model.npz'),
                        model.state_dict(), record.config_hash, cfg.method)


def run_experiment(cfg, out_dir=None, write=True, verbose=False):
    """
    Run one seeded experiment.

    Parameters
    ----------
    cfg : ExperimentConfig or dict
        configuration (a dict is passed to :class:`ExperimentConfig`)
    out_dir : str or None
        output directory; ``None`` uses ``cfg.out_dir``
    write : bool
        write ``progress.csv``, ``summary.json``, ``config.txt`` and the
        ``.npz`` checkpoints
    verbose : bool
        print progress to stderr

    Returns
    -------
    record : RunRecord

    Raises
    ------
    NumericalError
        a loss or gradient became non-finite; the partial record is
        written first with status ``'failed'``
    """
    if not isinstance(cfg, ExperimentConfig):
        cfg = ExperimentConfig(**cfg)
    if out_dir is None:
        out_dir = cfg.out_dir
    if write and not os.path.exists(out_dir):
        os.makedirs(out_dir)
    record = RunRecord(cfg)
    run = _run_image if cfg.image_task else _run_control
    _vprint(verbose, 'Running {} on {} (seed {}, config {})'.format(
        cfg.method, cfg.env, cfg.seed, record.config_hash))
    t0 = timer()
    try:
        run(cfg, record, out_dir if write else None, verbose)
    except NumericalError as e:
        record.status = 'failed'
        record.error = str(e)
        record.rows.append((max([r[0] for r in record.rows] or [0]),
                            'failed', 1.0))
        record.wall_clock = timer() - t0
        if write:
            record.write(out_dir)
        raise
    record.status = 'ok'
    record.wall_clock = timer() - t0
    if write:
        record.write(out_dir)
    return record
