# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np
from numpy.testing import assert_allclose, assert_equal
import pytest

import lbs.diffnum as dn
from lbs.diffnum import Param, Mlp, DiagonalGaussian
from lbs.errors import ShapeError, NumericalError
from lbs.tools.analytical import kl_quadrature
from lbs.tools.math import numerical_gradient

# elementwise steps of the random graphs, all smooth; x has shape (3, 4),
# b shape (4,)
_STEPS = [
    lambda x, b: dn.tanh(x),
    lambda x, b: dn.softplus(x),
    lambda x, b: x * b,
    lambda x, b: x + b,
    lambda x, b: dn.exp(0.3 * dn.tanh(x)),
    lambda x, b: dn.log1p(dn.square(x)),
    lambda x, b: x / (1 + dn.square(b)),
    lambda x, b: x - dn.mean(x, axis=0),
    lambda x, b: dn.concat([x[:, :2], 0.5 * x[:, 2:]]),
    lambda x, b: dn.log(dn.softplus(x) + 0.1),
]

_HEADS = [
    lambda y: dn.sum(dn.square(y)),
    lambda y: dn.mean(dn.tanh(y)),
    lambda y: dn.sum(dn.softplus(y), axis=0)[1] - dn.sum(y[0]),
]


def _random_graph(rng):
    a = Param(rng.normal(size=(3, 4)), 'a')
    b = Param(rng.normal(size=4), 'b')
    w = Param(0.5 * rng.normal(size=(4, 2)), 'w')
    steps = [_STEPS[i] for i in rng.integers(0, len(_STEPS),
                                              rng.integers(2, 7))]
    head = _HEADS[rng.integers(0, len(_HEADS))]

    def build():
        x = a
        for step in steps:
            x = step(x, b)
        return head(dn.matmul(x, w))

    return [a, b, w], build


def test_diffnum_gradients_random_graphs():
    """Reverse-mode gradients against central finite differences"""
    rng = np.random.default_rng(1)
    for trial in range(100):
        params, build = _random_graph(rng)
        dn.backward(build())
        for p in params:
            numeric = numerical_gradient(lambda: build().item(), p.value)
            assert_allclose(p.grad, numeric, rtol=1e-4, atol=1e-7,
                            err_msg='graph {}, parameter {}'
                                    .format(trial, p.name))


def test_diffnum_gradients_accumulate():
    p = Param([1.0, 2.0], 'p')
    loss = dn.sum(dn.square(p))
    dn.backward(loss)
    dn.backward(loss)
    assert_allclose(p.grad, [4.0, 8.0], rtol=0, atol=1e-15)
    p.zero_grad()
    assert_equal(p.grad, [0.0, 0.0])


def test_diffnum_shared_subexpression():
    """A node used twice receives both gradient contributions"""
    p = Param([3.0], 'p')
    y = p * p
    loss = dn.sum(y + y)  # 2 p^2
    loss.backward()
    assert_allclose(p.grad, [12.0], rtol=0, atol=1e-12)


def test_diffnum_contract_errors():
    with pytest.raises(ShapeError):
        dn.backward(Param(np.ones(3), 'v'))  # not a scalar
    with pytest.raises(ShapeError):
        Param(np.zeros((0, 3)), 'empty')
    with pytest.raises(ShapeError):
        dn.matmul(np.ones(3), Param(np.ones((2, 2)), 'w'))
    net = Mlp([3, 5, 2], rng=np.random.default_rng(0))
    with pytest.raises(ShapeError):
        dn.mlp_forward(net, np.ones((4, 2)))


def test_diffnum_mlp_evaluate_matches_forward():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(7, 3))
    for activation in ['relu', 'leaky_relu', 'tanh']:
        for init in ['uniform', 'orthogonal']:
            net = Mlp([3, 8, 8, 4], activation, init, rng=rng)
            assert_allclose(net.evaluate(x), dn.mlp_forward(net, x).value,
                            rtol=1e-12, atol=1e-12,
                            err_msg='{}, {}'.format(activation, init))
            # a single input behaves as a batch of one
            assert_allclose(net.evaluate(x[0]), net.evaluate(x)[0],
                            rtol=1e-12, atol=1e-12)

def test_diffnum_activations_keep_nan():
    """Recorded and plain activations agree, NaN included"""
    x = np.array([[np.nan, -1.0, 2.0]])
    for name, (recorded, plain) in dn._ACTIVATIONS.items():
        assert_equal(recorded(x).value, plain(x), err_msg=name)
    assert np.isnan(dn.relu(x).value[0, 0])
    net = Mlp([3, 4, 2], rng=np.random.default_rng(0))
    assert np.all(np.isnan(dn.mlp_forward(net, x).value))
    assert np.all(np.isnan(net.evaluate(x)))



def test_diffnum_mlp_empty_input():
    net = Mlp([0, 4, 3], rng=np.random.default_rng(0))
    assert net.weights[0] is None
    y = net(np.zeros((5, 0)))
    assert_equal(y.shape, (5, 3))
    assert_allclose(y.value, y.value[:1].repeat(5, axis=0), rtol=0, atol=0)


def test_diffnum_mlp_state_dict():
    a = Mlp([2, 6, 1], rng=np.random.default_rng(0), name='a')
    b = Mlp([2, 6, 1], rng=np.random.default_rng(1), name='a')
    x = np.linspace(-1, 1, 10).reshape(5, 2)
    b.load_state_dict(a.state_dict())
    assert_allclose(b.evaluate(x), a.evaluate(x), rtol=0, atol=0)

    c = Mlp([2, 7, 1], name='a')
    with pytest.raises(ShapeError):
        c.load_state_dict(a.state_dict())


def test_diffnum_orthogonal():
    rng = np.random.default_rng(3)
    w = dn.orthogonal((6, 3), 2.0, rng)
    assert_allclose(w.T.dot(w), 4 * np.eye(3), rtol=0, atol=1e-12)
    w = dn.orthogonal((3, 6), 1.0, rng)
    assert_allclose(w.dot(w.T), np.eye(3), rtol=0, atol=1e-12)


def test_diffnum_kl_examples():
    q = DiagonalGaussian([0.0], [1.0])
    assert_allclose(dn.kl_diag_gaussian(q, q).value, 0.0, rtol=0,
                    atol=1e-15)
    p = DiagonalGaussian([1.0], [1.0])
    assert_allclose(dn.kl_diag_gaussian(q, p).value, 0.5, rtol=1e-12)
    wide = DiagonalGaussian([0.0], [2.0])
    assert_allclose(dn.kl_diag_gaussian(wide, q).value, 0.806853,
                    rtol=0, atol=1e-6)
    with pytest.raises(ShapeError):
        dn.kl_diag_gaussian(q, DiagonalGaussian([0.0, 0.0], [1.0, 1.0]))


def test_diffnum_kl_quadrature():
    """Closed-form KL against numerical integration on 1D cases"""
    rng = np.random.default_rng(4)
    for i in range(20):
        mu_q, mu_p = rng.uniform(-2, 2, 2)
        sigma_q, sigma_p = rng.uniform(0.2, 3, 2)
        q = DiagonalGaussian([mu_q], [sigma_q])
        p = DiagonalGaussian([mu_p], [sigma_p])
        assert_allclose(q.kl(p).value,
                        kl_quadrature(mu_q, sigma_q, mu_p, sigma_p),
                        rtol=0, atol=1e-6)


def test_diffnum_kl_nonnegative():
    rng = np.random.default_rng(5)
    mean = rng.normal(size=(1000, 3))
    std = np.exp(rng.normal(size=(1000, 3)))
    q = DiagonalGaussian(mean, std)
    p = DiagonalGaussian(mean + 1e-9 * rng.normal(size=(1000, 3)),
                         std * (1 + 1e-9 * rng.normal(size=(1000, 3))))
    kl = dn.kl_diag_gaussian(q, p).value
    assert_equal(kl.shape, (1000,))
    assert np.all(kl >= 0)


def test_diffnum_entropy_decomposition():
    """KL(q‖p) = H[q, p] − H[q]"""
    rng = np.random.default_rng(6)
    q = DiagonalGaussian(rng.normal(size=(50, 4)),
                         np.exp(rng.normal(size=(50, 4))))
    p = DiagonalGaussian(rng.normal(size=(50, 4)),
                         np.exp(rng.normal(size=(50, 4))))
    kl = dn.kl_diag_gaussian(q, p).value
    decomposed = dn.gaussian_cross_entropy(q, p).value - \
        dn.gaussian_entropy(q).value
    assert_allclose(kl, decomposed, rtol=0, atol=1e-9)


def test_diffnum_log_density():
    d = DiagonalGaussian([0.0], [1.0])
    assert_allclose(dn.gaussian_log_density(d, [0.0]).value, -0.918939,
                    rtol=0, atol=1e-6)
    d = DiagonalGaussian([0.0, 1.0], [1.0, 2.0])
    expected = -np.log(2 * np.pi) - np.log(2) - 0.5 * (0.25 + 0.25)
    assert_allclose(d.log_prob([0.5, 2.0]).value, expected, rtol=1e-12)


def test_diffnum_gaussian_head():
    d = dn.gaussian_head(np.zeros(3), np.array([-1000.0, 0.0, 1000.0]))
    assert_allclose(d.std.value, [1e-5, np.log(2) + 1e-5, 1000 + 1e-5],
                    rtol=1e-12)
    assert np.all(d.std.value >= dn.STD_FLOOR)
    with pytest.raises(ShapeError):
        dn.gaussian_head(np.zeros(3), np.zeros(2))
    with pytest.raises(ValueError):
        DiagonalGaussian([0.0], [0.0])


def test_diffnum_reparam_sample():
    mean = Param([1.0, -1.0], 'mean')
    std = Param([0.5, 2.0], 'std')
    d = DiagonalGaussian(mean, std)
    noise = np.array([0.3, -0.7])
    z = dn.reparam_sample(d, noise)
    assert_allclose(z.value, [1.15, -2.4], rtol=1e-12)
    dn.sum(z).backward()
    assert_allclose(mean.grad, [1.0, 1.0], rtol=0, atol=0)
    assert_allclose(std.grad, noise, rtol=0, atol=0)
    with pytest.raises(ShapeError):
        dn.reparam_sample(d, np.zeros(3))


def test_diffnum_adam_first_step():
    """The first bias-corrected Adam step moves every entry by lr"""
    p = Param([3.0, -2.0, 0.5], 'p')
    opt = dn.Adam([p, p], lr=0.1)  # duplicate ignored
    assert_equal(len(opt.params), 1)
    opt.minimize(dn.sum(dn.square(p)))
    assert_allclose(p.value, [2.9, -1.9, 0.4], rtol=1e-6)


def test_diffnum_adam_converges():
    p = Param([3.0, -2.0], 'p')
    opt = dn.Adam([p], lr=0.01, max_grad_norm=1.0)
    for i in range(3000):
        opt.minimize(dn.sum(dn.square(p - 1.0)))
    assert_allclose(p.value, [1.0, 1.0], rtol=0, atol=1e-2)


def test_diffnum_adam_nonfinite():
    p = Param([1.0], 'weights')
    opt = dn.Adam([p])
    with pytest.raises(NumericalError, match='weights'):
        dn.sgd_adam_step(opt, [np.array([np.nan])])
    assert_equal(p.value, [1.0])
    with pytest.raises(NumericalError):
        opt.minimize(dn.sum(dn.log(p - 1.0)))


if __name__ == '__main__':
    test_diffnum_gradients_random_graphs()
    test_diffnum_gradients_accumulate()
    test_diffnum_shared_subexpression()
    test_diffnum_contract_errors()
    test_diffnum_mlp_evaluate_matches_forward()
    test_diffnum_activations_keep_nan()
    test_diffnum_mlp_empty_input()
    test_diffnum_mlp_state_dict()
    test_diffnum_orthogonal()
    test_diffnum_kl_examples()
    test_diffnum_kl_quadrature()
    test_diffnum_kl_nonnegative()
    test_diffnum_entropy_decomposition()
    test_diffnum_log_density()
    test_diffnum_gaussian_head()
    test_diffnum_reparam_sample()
    test_diffnum_adam_first_step()
    test_diffnum_adam_converges()
    test_diffnum_adam_nonfinite()
