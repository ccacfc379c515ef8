# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import absolute_import
import numpy as np
from scipy.integrate import quad
from scipy.special import logsumexp
from scipy.stats import norm

from ..latent import Transitions

# This file includes reference quantities computed independently of the
# closed-form expressions used by the models (by numerical quadrature), and
# toy transition datasets with known structure. They are used in unit
# testing and for sanity checks of the intrinsic-reward methods.


def kl_quadrature(mu_q, sigma_q, mu_p, sigma_p, width=12):
    r"""
    KL divergence of two 1D Gaussians,
    :math:`\int q \ln(q/p)\,dz`, by numerical quadrature.

    Parameters
    ----------
    mu_q, sigma_q, mu_p, sigma_p : float
        means and standard deviations of *q* and *p*
    width : float
        integration range in standard deviations of *q* around its mean

    Returns
    -------
    kl : float
    """
    def integrand(z):
        return norm.pdf(z, mu_q, sigma_q) * (norm.logpdf(z, mu_q, sigma_q) -
                                             norm.logpdf(z, mu_p, sigma_p))

    a = mu_q - width * sigma_q
    b = mu_q + width * sigma_q
    return quad(integrand, a, b, epsabs=1e-12, epsrel=1e-10, limit=200)[0]


def density_integral(mu, sigma, width=10, n=20001):
    """
    Integral of the 1D Gaussian density over a fine grid
    (trapezoidal rule), should be 1.
    """
    z = np.linspace(mu - width * sigma, mu + width * sigma, n)
    f = norm.pdf(z, mu, sigma)
    return (z[1] - z[0]) * (f.sum() - (f[0] + f[-1]) / 2)


class LatentToy(object):
    r"""
    One-dimensional latent-variable model with a Gaussian prior and a
    Gaussian likelihood whose mean and standard deviation are arbitrary
    functions of the latent:

    .. math::

        z \sim N(\mu_0, \sigma_0^2), \quad
        x \mid z \sim N(m(z), s(z)^2).

    Its log evidence :math:`\ln \int p(z) p(x|z)\,dz` is computed by
    quadrature and bounds every variational lower bound from above.

    Parameters
    ----------
    mu0, sigma0 : float
        prior parameters
    mean_fn, std_fn : callable
        likelihood mean and standard deviation as functions of *z*
    """
    def __init__(self, mu0, sigma0, mean_fn, std_fn):
        self.mu0 = mu0
        self.sigma0 = sigma0
        self.mean_fn = mean_fn
        self.std_fn = std_fn

    def log_joint(self, z, x):
        return norm.logpdf(z, self.mu0, self.sigma0) + \
            norm.logpdf(x, self.mean_fn(z), self.std_fn(z))

    def log_evidence(self, x, width=12):
        """:math:`\\ln p(x)` by quadrature over the prior support."""
        a = self.mu0 - width * self.sigma0
        b = self.mu0 + width * self.sigma0
        # shift by the maximum on a grid to keep the integrand in range
        grid = np.linspace(a, b, 2001)
        shift = np.max(self.log_joint(grid, x))
        val = quad(lambda z: np.exp(self.log_joint(z, x) - shift), a, b,
                   epsabs=0, epsrel=1e-10, limit=400)[0]
        return shift + np.log(val)

    def elbo(self, x, mu_q, sigma_q, n=100000, rng=None):
        """
        Monte-Carlo estimate of the lower bound
        :math:`E_q[\\ln p(x|z)] - KL(q \\| p)` with
        :math:`q = N(\\mu_q, \\sigma_q^2)`.

        Returns
        -------
        elbo, stderr : float
            estimate and its Monte-Carlo standard error
        """
        if rng is None:
            rng = np.random.default_rng(0)
        z = mu_q + sigma_q * rng.standard_normal(n)
        w = self.log_joint(z, x) - norm.logpdf(z, mu_q, sigma_q)
        return w.mean(), w.std() / np.sqrt(n)

    def log_evidence_is(self, x, mu_q, sigma_q, n=100000, rng=None):
        """Importance-sampling estimate of the log evidence (proposal q)."""
        if rng is None:
            rng = np.random.default_rng(0)
        z = mu_q + sigma_q * rng.standard_normal(n)
        w = self.log_joint(z, x) - norm.logpdf(z, mu_q, sigma_q)
        return logsumexp(w) - np.log(n)


class BaseToy(object):
    """
    Base class for toy transition datasets. Every such class exposes

    Attributes
    ----------
    transitions : Transitions
        the dataset
    states, actions, next_states : numpy array
        its arrays

    Parameters
    ----------
    n : int
        number of transitions
    rng : numpy.random.Generator
        source of the samples
    state_dim, action_dim : int
        dimensions
    """
    def __init__(self, n, rng, state_dim=1, action_dim=1):
        self.n = n
        self.states = rng.uniform(-1, 1, (n, state_dim))
        self.actions = rng.uniform(-1, 1, (n, action_dim))

    def _finish(self):
        self.transitions = Transitions(self.states, self.actions,
                                       self.next_states)


class DeterministicToy(BaseToy):
    """
    Deterministic dynamics :math:`s' = 0.8 s + 0.2 a` (action dimensions
    beyond the state dimensions are ignored).
    """
    def __init__(self, n, rng, state_dim=1, action_dim=1):
        super(DeterministicToy, self).__init__(n, rng, state_dim, action_dim)
        push = np.zeros((n, state_dim))
        k = min(state_dim, action_dim)
        push[:, :k] = self.actions[:, :k]
        self.next_states = 0.8 * self.states + 0.2 * push
        self._finish()


class NoiseToy(BaseToy):
    """
    Next states are pure noise :math:`s' \\sim U[-1, 1]`, independent of
    the state and the action.
    """
    def __init__(self, n, rng, state_dim=1, action_dim=1):
        super(NoiseToy, self).__init__(n, rng, state_dim, action_dim)
        self.next_states = rng.uniform(-1, 1, (n, state_dim))
        self._finish()


# segments of seven-segment digits: a (top), b (top right), c (bottom
# right), d (bottom), e (bottom left), f (top left), g (middle)
_SEGMENTS = {
    0: 'abcdef', 1: 'bc', 2: 'abged', 3: 'abgcd', 4: 'fgbc',
    5: 'afgcd', 6: 'afgedc', 7: 'abc', 8: 'abcdefg', 9: 'abcdfg',
}


class SyntheticDigits(object):
    """
    Labeled 28×28 images of seven-segment digit glyphs with random shifts,
    stroke widths and noise; a stand-in for MNIST when the dataset files
    are not available.

    Parameters
    ----------
    n : int
        number of images (labels cycle through 0–9)
    rng : numpy.random.Generator
        source of the variations
    size : int
        image side

    Attributes
    ----------
    images : numpy array
        shape (*n*, size, size), values in [0, 1]
    labels : numpy array
        shape (*n*,)
    """
    def __init__(self, n, rng, size=28):
        self.labels = np.arange(n) % 10
        self.images = np.empty((n, size, size))
        for i, label in enumerate(self.labels):
            self.images[i] = self.glyph(label, rng, size)

    @staticmethod
    def glyph(label, rng, size=28):
        im = np.zeros((size, size))
        w = rng.integers(2, 4)  # stroke width
        x0 = size // 4 + rng.integers(-2, 3)
        y0 = size // 6 + rng.integers(-2, 3)
        x1 = x0 + size // 2
        y1 = y0 + size * 2 // 3
        ym = (y0 + y1) // 2
        strokes = {
            'a': (y0, y0 + w, x0, x1 + w),
            'b': (y0, ym + w, x1, x1 + w),
            'c': (ym, y1 + w, x1, x1 + w),
            'd': (y1, y1 + w, x0, x1 + w),
            'e': (ym, y1 + w, x0, x0 + w),
            'f': (y0, ym + w, x0, x0 + w),
            'g': (ym, ym + w, x0, x1 + w),
        }
        for seg in _SEGMENTS[int(label)]:
            r0, r1, c0, c1 = strokes[seg]
            im[r0:r1, c0:c1] = 1.0
        im += rng.uniform(0, 0.1, im.shape)
        return np.clip(im, 0.0, 1.0)
