# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from . import diffnum as dn
from .disagreement import EnsembleModel
from .errors import ConfigError
from .icm import IcmModel
from .latent import LbsModel, LbsSurprisalModel
from .random_actions import RandomModel
from .rnd import RndModel

# Intrinsic-reward methods by name. Every model provides
#   reward(batch) -> per-transition rewards (numpy array)
#   train_step(batch) -> loss(es) before the step
#   state_dict() / load_state_dict()


def _lbs(cls):
    def build(S, A, rng, o):
        return cls(S, A, latent_dim=o['latent_dim'], hidden=o['hidden'],
                   beta=o['beta'], activation=o['activation'],
                   recon_std=o['recon_std'], std_floor=o['std_floor'],
                   lr=o['lr'], max_grad_norm=o['max_grad_norm'], rng=rng)
    return build


_BUILDERS = {
    'lbs': _lbs(LbsModel),
    'lbs-surprisal': _lbs(LbsSurprisalModel),
    'icm': lambda S, A, rng, o: IcmModel(
        S, A, feature_dim=o['icm_feature_dim'], hidden=o['hidden'],
        activation=o['activation'], lr=o['lr'],
        max_grad_norm=o['max_grad_norm'], rng=rng),
    'rnd': lambda S, A, rng, o: RndModel(
        S, feature_dim=o['rnd_feature_dim'], hidden=o['hidden'],
        activation=o['activation'], lr=o['lr'],
        max_grad_norm=o['max_grad_norm'], rng=rng),
    'disagreement': lambda S, A, rng, o: EnsembleModel(
        S, A, k=o['ensemble_k'], hidden=o['hidden'],
        activation=o['activation'], lr=o['lr'],
        max_grad_norm=o['max_grad_norm'], rng=rng),
    'random': lambda S, A, rng, o: RandomModel(),
}

METHODS = tuple(sorted(_BUILDERS))

_DEFAULTS = dict(latent_dim=0, hidden=32, beta=0.1, activation='relu',
                 recon_std='learned', std_floor=dn.STD_FLOOR, lr=3e-4,
                 max_grad_norm=None, icm_feature_dim=0, rnd_feature_dim=0,
                 ensemble_k=5)


def make_model(method, state_dim, action_dim, rng, **options):
    """
    Intrinsic-reward model by method name.

    Parameters
    ----------
    method : str
        one of :data:`METHODS`
    state_dim, action_dim : int
        transition dimensions
    rng : numpy.random.Generator
        generator owned by the model
    **options
        ``latent_dim``, ``hidden``, ``beta``, ``activation``,
        ``recon_std``, ``std_floor``, ``lr``, ``max_grad_norm``,
        ``icm_feature_dim``, ``rnd_feature_dim``, ``ensemble_k``; options a
        method does not use are ignored

    Returns
    -------
    model
    """
    if method not in _BUILDERS:
        raise ConfigError('Unknown method "{}", use one of {}'
                          .format(method, list(METHODS)))
    unknown = set(options) - set(_DEFAULTS)
    if unknown:
        raise ConfigError('Unknown model options {}'.format(sorted(unknown)))
    o = dict(_DEFAULTS, **options)
    return _BUILDERS[method](state_dim, action_dim, rng, o)
