# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import hashlib
import os
from collections import OrderedDict

from .envs import CONTROL_ENVS, IMAGE_ENVS, STOCHASTIC_ENVS
from .errors import ConfigError
from .intrinsic import METHODS

ENV_IDS = tuple(sorted(CONTROL_ENVS)) + IMAGE_ENVS

# documented keys with their defaults (the type of the default is the type
# of the key; beta=None means "auto")
DEFAULTS = OrderedDict([
    ('env', 'mountain-car'),
    ('method', 'lbs'),
    ('steps', 200000),
    ('seed', 0),
    ('lr', 3e-4),
    ('beta', None),
    ('gamma', 0.99),
    ('lam', 0.95),
    ('clip', 0.2),
    ('horizon', 2048),
    ('epochs', 10),
    ('minibatches', 32),
    ('hidden', 32),
    ('policy_hidden', 64),
    ('latent_dim', 0),
    ('ensemble_k', 5),
    ('eta_e', 0.0),
    ('eta_i', 1.0),
    ('vf_coef', 0.5),
    ('ent_coef', 0.001),
    ('max_grad_norm', 0.0),
    ('std_floor', 1e-5),
    ('recon_std', 'learned'),
    ('activation', 'relu'),
    ('state_dependent_std', False),
    ('episode_steps', 1000),
    ('icm_feature_dim', 0),
    ('rnd_feature_dim', 0),
    ('batches', 50000),
    ('batch_size', 128),
    ('ratio_every', 100),
    ('n_eval', 512),
    ('pool', True),
    ('image_hidden', 64),
    ('image_latent_dim', 16),
    ('data_dir', ''),
    ('out', ''),
])

# keys that do not change the experiment itself
_NOT_HASHED = ('out', 'data_dir', 'seed')

_CHOICES = {
    'env': ENV_IDS,
    'method': METHODS,
    'recon_std': ('learned', 'unit'),
    'activation': ('relu', 'leaky_relu'),
}

_POSITIVE = ('steps', 'lr', 'horizon', 'epochs', 'minibatches', 'hidden',
             'policy_hidden', 'ensemble_k', 'std_floor', 'episode_steps',
             'batches', 'batch_size', 'ratio_every', 'n_eval',
             'image_hidden', 'image_latent_dim')

_NONNEGATIVE = ('seed', 'latent_dim', 'eta_e', 'eta_i', 'vf_coef',
                'ent_coef', 'max_grad_norm', 'icm_feature_dim',
                'rnd_feature_dim', 'clip')

_TRUE = ('true', 'yes', 'on', '1')
_FALSE = ('false', 'no', 'off', '0')


def _coerce(key, value):
    default = DEFAULTS[key]
    if key == 'beta':
        if value is None or str(value).strip().lower() == 'auto':
            return None
        default = 0.0
    try:
        if isinstance(default, bool):
            if isinstance(value, bool):
                return value
            text = str(value).strip().lower()
            if text in _TRUE:
                return True
            if text in _FALSE:
                return False
            raise ValueError(value)
        if isinstance(default, int):
            number = float(value)
            if number != int(number):
                raise ValueError(value)
            return int(number)
        if isinstance(default, float):
            return float(value)
        return str(value).strip()
    except (TypeError, ValueError):
        raise ConfigError('Bad value "{}" for "{}" (expected {})'.format(
            value, key, type(default).__name__))


class ExperimentConfig(object):
    """
    Experiment configuration: every key of :data:`DEFAULTS` as an
    attribute.

    Parameters
    ----------
    **values
        keys to change from their defaults; unknown keys raise
        :class:`~lbs.errors.ConfigError`

    Notes
    -----
    ``beta`` left at ``None`` ("auto") resolves to 0.1 for Mountain Car and
    2.0 for the stochastic tasks, ``latent_dim = 0`` means "state
    dimension", ``max_grad_norm = 0`` disables clipping and an empty
    ``out`` resolves to ``runs/<env>-<method>-<seed>``.
    """
    def __init__(self, **values):
        unknown = [k for k in values if k not in DEFAULTS]
        if unknown:
            raise ConfigError('Unknown configuration key(s) {}; known keys '
                              'are {}'.format(unknown, list(DEFAULTS)))
        self._values = OrderedDict(DEFAULTS)
        for key, value in values.items():
            self._values[key] = _coerce(key, value)
        self._validate()

    def _validate(self):
        v = self._values
        for key, choices in _CHOICES.items():
            if v[key] not in choices:
                raise ConfigError('Bad {} "{}", use one of {}'
                                  .format(key, v[key], list(choices)))
        for key in _POSITIVE:
            if not v[key] > 0:
                raise ConfigError('"{}" must be positive, got {}'
                                  .format(key, v[key]))
        for key in _NONNEGATIVE:
            if v[key] < 0:
                raise ConfigError('"{}" must be nonnegative, got {}'
                                  .format(key, v[key]))
        if v['beta'] is not None and v['beta'] < 0:
            raise ConfigError('"beta" must be nonnegative, got {}'
                              .format(v['beta']))
        if not 0 < v['gamma'] <= 1 or not 0 <= v['lam'] <= 1:
            raise ConfigError('Need 0 < gamma <= 1 and 0 <= lam <= 1')
        if v['env'] in IMAGE_ENVS and v['method'] == 'random':
            raise ConfigError('The random baseline has no reward to evaluate '
                              'on "{}"'.format(v['env']))

    def __getattr__(self, key):
        values = self.__dict__.get('_values')
        if values is not None and key in values:
            return values[key]
        raise AttributeError(key)

    def __eq__(self, other):
        return isinstance(other, ExperimentConfig) and \
            self._values == other._values

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        changed = ', '.join('{}={!r}'.format(k, v)
                            for k, v in self._values.items()
                            if v != DEFAULTS[k])
        return 'ExperimentConfig({})'.format(changed)

    @classmethod
    def from_file(cls, path, **overrides):
        """
        Read a flat ``key = value`` file (``#`` starts a comment).
        **overrides** take precedence over the file.
        """
        values = {}
        with open(path) as f:
            for num, line in enumerate(f, 1):
                line = line.split('#', 1)[0].strip()
                if not line:
                    continue
                if '=' not in line:
                    raise ConfigError('{}:{}: expected "key = value", got '
                                      '"{}"'.format(path, num, line))
                key, value = (s.strip() for s in line.split('=', 1))
                if key not in DEFAULTS:
                    raise ConfigError('{}:{}: unknown key "{}"'
                                      .format(path, num, key))
                values[key] = value
        values.update(overrides)
        return cls(**values)

    def as_dict(self):
        return OrderedDict(self._values)

    def replace(self, **values):
        """Copy with some keys changed."""
        new = self.as_dict()
        new.update(values)
        return ExperimentConfig(**new)

    def to_text(self):
        """Contents of a configuration file reproducing this one."""
        lines = []
        for key, value in self._values.items():
            if value is None:
                value = 'auto'
            elif isinstance(value, bool):
                value = 'true' if value else 'false'
            lines.append('{} = {}'.format(key, value))
        return '\n'.join(lines) + '\n'

    def config_hash(self):
        """
        First 12 hex digits of the SHA-256 of the sorted ``key=value``
        lines, excluding ``out``, ``data_dir`` and ``seed``.
        """
        lines = sorted('{}={!r}'.format(k, v) for k, v in self._values.items()
                       if k not in _NOT_HASHED)
        return hashlib.sha256('\n'.join(lines).encode('utf-8')).hexdigest()[:12]

    # resolved values

    @property
    def stochastic(self):
        return self.env in STOCHASTIC_ENVS

    @property
    def image_task(self):
        return self.env in IMAGE_ENVS

    @property
    def resolved_beta(self):
        if self.beta is not None:
            return self.beta
        return 2.0 if self.stochastic else 0.1

    @property
    def out_dir(self):
        return self.out or os.path.join(
            'runs', '{}-{}-{}'.format(self.env, self.method, self.seed))

    def model_options(self):
        """Options of :func:`lbs.intrinsic.make_model`."""
        image = self.image_task
        return dict(
            latent_dim=self.image_latent_dim if image else self.latent_dim,
            hidden=self.image_hidden if image else self.hidden,
            beta=self.resolved_beta,
            activation=self.activation,
            recon_std=self.recon_std,
            std_floor=self.std_floor,
            lr=self.lr,
            max_grad_norm=self.max_grad_norm or None,
            icm_feature_dim=self.icm_feature_dim,
            rnd_feature_dim=self.rnd_feature_dim,
            ensemble_k=self.ensemble_k,
        )
