# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import warnings

import numpy as np
from numpy.testing import assert_allclose, assert_equal
import pytest

from lbs.tools.math import softplus, numerical_gradient, minibatch_indices


def test_softplus():
    x = np.linspace(-30, 30, 61)
    assert_allclose(softplus(x), np.log1p(np.exp(x)), rtol=1e-12)
    with warnings.catch_warnings():
        warnings.simplefilter('error')  # no overflow
        assert_equal(softplus(np.array([-1000.0, 1000.0])), [0.0, 1000.0])


def test_numerical_gradient():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(3, 4))
    orig = x.copy()
    grad = numerical_gradient(lambda: np.sum(x ** 3), x)
    assert_allclose(grad, 3 * orig ** 2, rtol=1e-7, atol=1e-9)
    assert_equal(x, orig)


def test_minibatch_indices():
    rng = np.random.default_rng(1)
    parts = minibatch_indices(2048, 32, rng)
    assert_equal(len(parts), 32)
    assert_equal([len(p) for p in parts], [64] * 32)
    assert_equal(np.sort(np.concatenate(parts)), np.arange(2048))

    parts = minibatch_indices(5, 8, rng)
    assert_equal(len(parts), 5)
    assert_equal(np.sort(np.concatenate(parts)), np.arange(5))

    assert_equal(minibatch_indices(0, 4, rng), [])
    with pytest.raises(ValueError):
        minibatch_indices(10, 0, rng)


if __name__ == '__main__':
    test_softplus()
    test_numerical_gradient()
    test_minibatch_indices()
