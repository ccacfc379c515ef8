# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np
from scipy.linalg import qr
from scipy.special import expit

from .errors import ShapeError, NumericalError, check_finite

#############################################################################
# diffnum - minimal reverse-mode differentiable numerics
#
# Every learned model in PyLBS (latent dynamics model, curiosity baselines,
# actor-critic) is built from the pieces in this module:
#
#   Node, Param     values recorded in a dynamic computation graph
#   backward()      scalar-loss reverse-mode differentiation
#   Mlp             dense layers with ReLU / LeakyReLU / tanh activations
#   DiagonalGaussian and its closed-form operations (KL, log-density,
#                   entropy, reparametrized sampling)
#   Adam            gradient-based parameter updates
#
# The graph is built on the fly by the operations themselves and is owned
# by the thread that builds it. Parameters are plain NumPy arrays wrapped in
# Param objects; they can be handed to another thread, but must not be
# updated from two threads at once.
#
# All arrays are float64. Batched quantities have the batch along the first
# axis and distribution dimensions along the last axis.
#############################################################################

# floor added to every softplus standard deviation
STD_FLOOR = 1e-5

LEAKY_SLOPE = 0.01

_LOG_2PI = np.log(2 * np.pi)


class Node(object):
    """
    A value recorded in the computation graph.

    Nodes are created by the operations of this module and keep references
    to their parents together with a closure that maps the gradient with
    respect to the node to the gradients with respect to the parents.
    Arithmetic operators (``+``, ``-``, ``*``, ``/``, ``@``, unary ``-``,
    indexing) are overloaded, so expressions can be written naturally.

    Parameters
    ----------
    value : array_like
        the value (converted to a float64 array)
    parents : tuple of Node
        nodes this one was computed from
    backward : callable or None
        ``backward(g)`` returns a tuple (one entry per parent) of gradients,
        ``None`` entries meaning "no gradient"
    """
    __array_priority__ = 100  # make ndarray (op) Node defer to Node

    def __init__(self, value, parents=(), backward=None):
        self.value = np.asarray(value, dtype=float)
        self._parents = parents
        self._backward = backward

    @property
    def shape(self):
        return self.value.shape

    @property
    def ndim(self):
        return self.value.ndim

    @property
    def size(self):
        return self.value.size

    def item(self):
        return self.value.item()

    def backward(self):
        """Differentiate this (scalar) node, see :func:`backward`."""
        backward(self)

    def __repr__(self):
        return '{}(shape={})'.format(type(self).__name__, self.shape)

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    __div__ = __truediv__
    __rdiv__ = __rtruediv__

    def __neg__(self):
        return neg(self)

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, index):
        return getitem(self, index)


class Param(Node):
    """
    Trainable parameter tensor (a graph leaf that accumulates gradients).

    Parameters
    ----------
    value : array_like
        initial values
    name : str
        name used in diagnostics and checkpoints

    Attributes
    ----------
    grad : numpy array
        accumulated gradient, same shape as :attr:`value`
    """
    def __init__(self, value, name='param'):
        super(Param, self).__init__(value)
        if self.value.ndim == 0 or any(n <= 0 for n in self.value.shape):
            raise ShapeError('Parameter "{}" must have a non-empty shape, '
                             'got {}'.format(name, self.value.shape))
        self.name = name
        self.grad = np.zeros_like(self.value)

    def zero_grad(self):
        self.grad[...] = 0.0


def as_node(x):
    """Wrap a constant into a :class:`Node` (nodes are returned as is)."""
    if isinstance(x, Node):
        return x
    return Node(x)


def detach(x):
    """Copy of the value of **x** as a constant (no gradient flows back)."""
    return Node(as_node(x).value.copy())


def backward(loss):
    """
    Reverse-mode differentiation of a scalar loss.

    Gradients are *accumulated* into the :attr:`Param.grad` of every
    parameter the loss depends on (call :meth:`Adam.zero_grad` or
    :meth:`Param.zero_grad` between steps).

    Parameters
    ----------
    loss : Node
        scalar produced by the operations of this module

    Returns
    -------
    None
    """
    if not isinstance(loss, Node) or loss.size != 1:
        raise ShapeError('backward() needs a scalar loss node, got {}'
                         .format(getattr(loss, 'shape', type(loss))))

    # topological order (iterative DFS, graphs can be deep)
    order = []
    visited = set()
    stack = [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in visited:
                stack.append((parent, False))

    grads = {id(loss): np.ones_like(loss.value)}
    for node in reversed(order):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        if isinstance(node, Param):
            node.grad += g
        if node._backward is None:
            continue
        for parent, pg in zip(node._parents, node._backward(g)):
            if pg is None:
                continue
            key = id(parent)
            if key in grads:
                grads[key] = grads[key] + pg
            else:
                grads[key] = pg


def _unbroadcast(g, shape):
    """Sum **g** over the axes that broadcasting added to **shape**."""
    if g.shape == shape:
        return g
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, n in enumerate(shape):
        if n == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g.reshape(shape)


# Elementary operations. Each takes nodes or array-likes and returns a Node.

def add(a, b):
    a, b = as_node(a), as_node(b)
    return Node(a.value + b.value, (a, b),
                lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)))


def sub(a, b):
    a, b = as_node(a), as_node(b)
    return Node(a.value - b.value, (a, b),
                lambda g: (_unbroadcast(g, a.shape),
                           _unbroadcast(-g, b.shape)))


def mul(a, b):
    a, b = as_node(a), as_node(b)
    return Node(a.value * b.value, (a, b),
                lambda g: (_unbroadcast(g * b.value, a.shape),
                           _unbroadcast(g * a.value, b.shape)))


def div(a, b):
    a, b = as_node(a), as_node(b)
    out = a.value / b.value
    return Node(out, (a, b),
                lambda g: (_unbroadcast(g / b.value, a.shape),
                           _unbroadcast(-g * out / b.value, b.shape)))


def neg(a):
    a = as_node(a)
    return Node(-a.value, (a,), lambda g: (-g,))


def matmul(x, w):
    """Matrix product ``x @ w`` for x of shape (n,) or (batch, n), w (n, m)."""
    x, w = as_node(x), as_node(w)
    if w.ndim != 2 or x.shape[-1] != w.shape[0]:
        raise ShapeError('matmul: shapes {} and {} are not aligned'
                         .format(x.shape, w.shape))

    def grad(g):
        gx = g.dot(w.value.T)
        if x.ndim == 1:
            gw = np.outer(x.value, g)
        else:
            gw = x.value.T.dot(g)
        return gx, gw

    return Node(x.value.dot(w.value), (x, w), grad)


def square(a):
    a = as_node(a)
    return Node(a.value ** 2, (a,), lambda g: (2 * a.value * g,))


def exp(a):
    a = as_node(a)
    out = np.exp(a.value)
    return Node(out, (a,), lambda g: (g * out,))


def log(a):
    a = as_node(a)
    return Node(np.log(a.value), (a,), lambda g: (g / a.value,))


def log1p(a):
    a = as_node(a)
    return Node(np.log1p(a.value), (a,), lambda g: (g / (1 + a.value),))


def relu(a):
    a = as_node(a)
    mask = a.value > 0
    return Node(np.maximum(a.value, 0.0), (a,), lambda g: (g * mask,))


def leaky_relu(a, slope=LEAKY_SLOPE):
    a = as_node(a)
    factor = np.where(a.value > 0, 1.0, slope)
    return Node(a.value * factor, (a,), lambda g: (g * factor,))


def tanh(a):
    a = as_node(a)
    out = np.tanh(a.value)
    return Node(out, (a,), lambda g: (g * (1 - out ** 2),))


def softplus(a):
    """Numerically stable ``log(1 + exp(a))``."""
    a = as_node(a)
    return Node(np.logaddexp(0.0, a.value), (a,),
                lambda g: (g * expit(a.value),))


def clip(a, low, high):
    a = as_node(a)
    mask = (a.value >= low) & (a.value <= high)
    return Node(np.clip(a.value, low, high), (a,), lambda g: (g * mask,))


def minimum(a, b):
    a, b = as_node(a), as_node(b)
    first = a.value <= b.value
    return Node(np.minimum(a.value, b.value), (a, b),
                lambda g: (_unbroadcast(g * first, a.shape),
                           _unbroadcast(g * ~first, b.shape)))


def sum(a, axis=None):
    a = as_node(a)

    def grad(g):
        if axis is not None:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, a.shape),)

    return Node(np.sum(a.value, axis=axis), (a,), grad)


def mean(a, axis=None):
    a = as_node(a)
    n = a.size if axis is None else a.shape[axis]
    return sum(a, axis) / float(n)


def concat(nodes, axis=-1):
    nodes = [as_node(n) for n in nodes]
    sizes = np.cumsum([n.shape[axis] for n in nodes])[:-1]
    return Node(np.concatenate([n.value for n in nodes], axis=axis),
                tuple(nodes),
                lambda g: tuple(np.split(g, sizes, axis=axis)))


def getitem(a, index):
    """Basic (slice) indexing, ``a[index]``."""
    a = as_node(a)

    def grad(g):
        full = np.zeros_like(a.value)
        full[index] = g
        return (full,)

    return Node(a.value[index], (a,), grad)


_ACTIVATIONS = {
    'relu': (relu, lambda x: np.maximum(x, 0.0)),
    'leaky_relu': (leaky_relu,
                   lambda x: np.where(x > 0, x, LEAKY_SLOPE * x)),
    'tanh': (tanh, np.tanh),
}


def orthogonal(shape, gain, rng):
    """
    Orthogonal matrix of the given 2D shape scaled by **gain**
    (QR decomposition of a Gaussian matrix with sign correction).
    """
    rows, cols = shape
    a = rng.standard_normal((max(rows, cols), min(rows, cols)))
    q, r = qr(a, mode='economic')
    q = q * np.sign(np.diag(r))
    if rows < cols:
        q = q.T
    return gain * q


class Mlp(object):
    """
    Multilayer perceptron: dense layers with an activation between them
    (no activation after the last layer).

    Parameters
    ----------
    widths : list of int
        layer widths ``[input, hidden..., output]``; at least two entries
    activation : str
        ``'relu'`` (default), ``'leaky_relu'`` or ``'tanh'``
    init : str
        weight initialization:

        ``'uniform'`` (default)
            weights and biases ~ U(−1/√fan_in, 1/√fan_in)
        ``'orthogonal'``
            orthogonal weights (gain √2 for hidden layers,
            **out_gain** for the last one), zero biases
        ``'zeros'``
            all parameters zero
    rng : numpy.random.Generator
        source of the initial weights
    out_gain : float
        gain of the last layer for orthogonal initialization
    name : str
        prefix of the parameter names

    Attributes
    ----------
    weights, biases : list of Param
        layer parameters
    """
    def __init__(self, widths, activation='relu', init='uniform', rng=None,
                 out_gain=1.0, name='mlp'):
        widths = [int(w) for w in widths]
        if len(widths) < 2 or any(w < 0 for w in widths) or widths[-1] == 0:
            raise ShapeError('Incorrect layer widths {}'.format(widths))
        if activation not in _ACTIVATIONS:
            raise ValueError('Unknown activation "{}"'.format(activation))
        if rng is None:
            rng = np.random.default_rng()

        self.widths = widths
        self.activation = activation
        self.name = name
        self.weights = []
        self.biases = []
        n_layers = len(widths) - 1
        for i, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
            if init == 'zeros' or fan_in == 0:
                w = np.zeros((fan_in, fan_out))
                b = np.zeros(fan_out)
            elif init == 'uniform':
                bound = 1 / np.sqrt(fan_in)
                w = rng.uniform(-bound, bound, (fan_in, fan_out))
                b = rng.uniform(-bound, bound, fan_out)
            elif init == 'orthogonal':
                gain = out_gain if i == n_layers - 1 else np.sqrt(2)
                w = orthogonal((fan_in, fan_out), gain, rng)
                b = np.zeros(fan_out)
            else:
                raise ValueError('Unknown initialization "{}"'.format(init))
            # a layer with no inputs (e.g. an empty action vector) is just
            # its bias
            if fan_in > 0:
                self.weights.append(Param(w, '{}.w{}'.format(name, i)))
            else:
                self.weights.append(None)
            self.biases.append(Param(b, '{}.b{}'.format(name, i)))

    @property
    def params(self):
        return [p for p in self.weights + self.biases if p is not None]

    def parameters(self):
        """List of all :class:`Param` of the network."""
        return self.params

    def _check_input(self, shape):
        if len(shape) == 0 or shape[-1] != self.widths[0]:
            raise ShapeError('{}: input of shape {} does not match input '
                             'width {}'.format(self.name, shape,
                                               self.widths[0]))

    def forward(self, x):
        """
        Recorded forward pass (see :func:`mlp_forward`).

        Parameters
        ----------
        x : Node or array_like
            input of shape (width,) or (batch, width)

        Returns
        -------
        y : Node
            output of shape (out,) or (batch, out)
        """
        x = as_node(x)
        self._check_input(x.shape)
        act = _ACTIVATIONS[self.activation][0]
        last = len(self.biases) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w is None:
                x = b + np.zeros(x.shape[:-1] + (b.shape[0],))
            else:
                x = matmul(x, w) + b
            if i < last:
                x = act(x)
        return x

    __call__ = forward

    def evaluate(self, x):
        """
        Same as :meth:`forward`, but on plain arrays and without recording
        (for acting and reward evaluation).
        """
        x = np.asarray(x, dtype=float)
        self._check_input(x.shape)
        act = _ACTIVATIONS[self.activation][1]
        last = len(self.biases) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w is None:
                x = b.value + np.zeros(x.shape[:-1] + (b.shape[0],))
            else:
                x = x.dot(w.value) + b.value
            if i < last:
                x = act(x)
        return x

    def state_dict(self):
        """Parameter values by name (copies)."""
        return {p.name: p.value.copy() for p in self.params}

    def load_state_dict(self, state):
        for p in self.params:
            if state[p.name].shape != p.shape:
                raise ShapeError('Checkpoint shape {} for "{}" does not match '
                                 '{}'.format(state[p.name].shape, p.name,
                                             p.shape))
            p.value[...] = state[p.name]


def mlp_forward(net, x):
    """
    Forward pass of **net** on **x**, recorded for reverse-mode
    differentiation. Raises :class:`~lbs.errors.ShapeError` if the input
    width does not match the first layer.
    """
    return net.forward(x)


class DiagonalGaussian(object):
    """
    Multivariate Gaussian with diagonal covariance.

    Parameters
    ----------
    mean : Node or array_like
        means, shape (d,) or (batch, d)
    std : Node or array_like
        standard deviations (strictly positive), same shape as **mean**
    """
    def __init__(self, mean, std):
        self.mean = as_node(mean)
        self.std = as_node(std)
        if self.mean.shape != self.std.shape:
            raise ShapeError('Gaussian mean {} and std {} shapes differ'
                             .format(self.mean.shape, self.std.shape))
        if np.any(self.std.value <= 0):
            raise ValueError('Gaussian standard deviations must be positive')

    @property
    def dim(self):
        return self.mean.shape[-1]

    def entropy(self):
        return gaussian_entropy(self)

    def log_prob(self, x):
        return gaussian_log_density(self, x)

    def sample(self, noise):
        return reparam_sample(self, noise)

    def kl(self, other):
        return kl_diag_gaussian(self, other)


def gaussian_head(raw_mean, raw_std_logits, std_floor=STD_FLOOR):
    """
    Distributional output layer: the mean is passed through, the standard
    deviation is ``softplus(raw_std_logits) + std_floor``.

    Returns
    -------
    d : DiagonalGaussian
    """
    raw_mean, raw_std_logits = as_node(raw_mean), as_node(raw_std_logits)
    if raw_mean.shape != raw_std_logits.shape:
        raise ShapeError('gaussian_head: mean {} and std logits {} shapes '
                         'differ'.format(raw_mean.shape, raw_std_logits.shape))
    return DiagonalGaussian(raw_mean, softplus(raw_std_logits) + std_floor)


def split_gaussian_head(out, std_floor=STD_FLOOR):
    """
    :func:`gaussian_head` on a network output whose last axis holds the
    means followed by the standard-deviation logits.
    """
    d = out.shape[-1] // 2
    return gaussian_head(out[..., :d], out[..., d:], std_floor)


def _same_dim(q, p, what):
    if q.dim != p.dim:
        raise ShapeError('{}: dimensions {} and {} differ'
                         .format(what, q.dim, p.dim))


def kl_diag_gaussian(q, p):
    """
    Closed-form KL divergence KL(q ‖ p) of two diagonal Gaussians, summed
    over the last axis.

    Computed as ½ Σ [u − log(1 + u) + ((μq − μp)/σp)²] with
    u = (σq/σp)² − 1, which equals
    Σ [log(σp/σq) + (σq² + (μq − μp)²)/(2σp²) − ½]
    and is nonnegative also in floating point.

    Returns
    -------
    kl : Node
        shape () or (batch,)
    """
    _same_dim(q, p, 'kl_diag_gaussian')
    u = square(q.std / p.std) - 1.0
    d = (q.mean - p.mean) / p.std
    return 0.5 * sum(u - log1p(u) + square(d), axis=-1)


def reparam_sample(d, noise):
    """Reparametrized sample ``mean + std * noise``."""
    noise = as_node(noise)
    if noise.shape[-1:] != (d.dim,):
        raise ShapeError('reparam_sample: noise of shape {} for a {}-D '
                         'Gaussian'.format(noise.shape, d.dim))
    return d.mean + d.std * noise


def gaussian_log_density(d, x):
    """Log density of **x** under **d**, summed over the last axis."""
    x = as_node(x)
    if x.shape[-1:] != (d.dim,):
        raise ShapeError('gaussian_log_density: point of shape {} for a '
                         '{}-D Gaussian'.format(x.shape, d.dim))
    z = (x - d.mean) / d.std
    return sum(-0.5 * _LOG_2PI - log(d.std) - 0.5 * square(z), axis=-1)


def gaussian_entropy(d):
    """Differential entropy Σ ½ log(2πe σ²)."""
    return sum(0.5 * (_LOG_2PI + 1.0) + log(d.std), axis=-1)


def gaussian_cross_entropy(q, p):
    """Cross-entropy H[q, p] = −E_q[log p], summed over the last axis."""
    _same_dim(q, p, 'gaussian_cross_entropy')
    return sum(0.5 * _LOG_2PI + log(p.std)
               + (square(q.std) + square(q.mean - p.mean))
               / (2 * square(p.std)), axis=-1)


class Adam(object):
    """
    Adam optimizer over a list of :class:`Param`.

    Parameters
    ----------
    params : list of Param
        parameters to update (duplicates are ignored)
    lr : float
        learning rate
    betas : tuple of float
        decay rates of the first and second moment estimates
    eps : float
        denominator offset
    max_grad_norm : float or None
        if set, gradients are rescaled so that their global L2 norm does
        not exceed this value
    """
    def __init__(self, params, lr=3e-4, betas=(0.9, 0.999), eps=1e-8,
                 max_grad_norm=None):
        unique = []
        seen = set()
        for p in params:
            if id(p) not in seen:
                seen.add(id(p))
                unique.append(p)
        self.params = unique
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.max_grad_norm = max_grad_norm or None
        self.t = 0
        self._m = [np.zeros_like(p.value) for p in self.params]
        self._v = [np.zeros_like(p.value) for p in self.params]

    def zero_grad(self):
        for p in self.params:
            p.zero_grad()

    def step(self):
        """
        Apply one update using the accumulated gradients.

        Raises :class:`~lbs.errors.NumericalError` (naming the parameter)
        if a gradient is not finite; parameters are left untouched then.
        """
        for p in self.params:
            check_finite(p.grad, 'gradient of "{}"'.format(p.name))

        scale = 1.0
        if self.max_grad_norm is not None:
            norm = np.sqrt(np.sum([np.sum(p.grad ** 2) for p in self.params]))
            if norm > self.max_grad_norm:
                scale = self.max_grad_norm / norm

        self.t += 1
        c1 = 1 - self.beta1 ** self.t
        c2 = 1 - self.beta2 ** self.t
        for p, m, v in zip(self.params, self._m, self._v):
            g = p.grad * scale
            m *= self.beta1
            m += (1 - self.beta1) * g
            v *= self.beta2
            v += (1 - self.beta2) * g ** 2
            p.value -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)

    def minimize(self, loss):
        """Zero gradients, differentiate **loss** and take one step."""
        if not np.isfinite(loss.value).all():
            raise NumericalError('Non-finite loss {}'.format(loss.value))
        self.zero_grad()
        backward(loss)
        self.step()


def sgd_adam_step(optimizer, gradients=None):
    """
    One Adam update.

    Parameters
    ----------
    optimizer : Adam
        optimizer holding the parameters and its state
    gradients : list of numpy array, optional
        gradients to use instead of the accumulated :attr:`Param.grad`
        (same order as ``optimizer.params``)
    """
    if gradients is not None:
        for p, g in zip(optimizer.params, gradients):
            p.grad[...] = g
    optimizer.step()


class ModelBase(object):
    """
    Parameter bookkeeping shared by the models assembled from :class:`Mlp`
    networks. Subclasses list their networks in :attr:`nets`.
    """
    nets = ()

    @property
    def params(self):
        return [p for net in self.nets for p in net.params]

    def state_dict(self):
        """All parameter values by name (copies)."""
        state = {}
        for net in self.nets:
            state.update(net.state_dict())
        return state

    def load_state_dict(self, state):
        missing = [p.name for p in self.params if p.name not in state]
        if missing:
            raise ShapeError('Checkpoint lacks parameters {}'.format(missing))
        for net in self.nets:
            net.load_state_dict(state)
