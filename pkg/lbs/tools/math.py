import numpy as np


def softplus(x):
    """
    Softplus function :math:`\\ln(1 + e^x)`, evaluated without overflow.

    Parameters
    ----------
    x : float or numpy array

    Returns
    -------
    out : float or numpy array
    """
    return np.logaddexp(0.0, x)


def numerical_gradient(f, x, step=1e-5):
    """
    Gradient of a scalar function by central finite differences.

    Parameters
    ----------
    f : callable
        ``f()`` returns a float and depends on the array **x**
    x : numpy array
        array perturbed in place (restored afterwards)
    step : float
        finite-difference step

    Returns
    -------
    grad : numpy array
        same shape as **x**
    """
    grad = np.zeros_like(x, dtype=float)
    flat = x.reshape(-1)  # view, so f() sees the perturbations
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + step
        fp = f()
        flat[i] = orig - step
        fm = f()
        flat[i] = orig
        gflat[i] = (fp - fm) / (2 * step)
    return grad


def minibatch_indices(n, minibatches, rng):
    """
    Random partition of ``range(n)`` into **minibatches** nearly equal
    parts (fewer if *n* < **minibatches**).

    Parameters
    ----------
    n : int
        number of samples
    minibatches : int
        number of parts
    rng : numpy.random.Generator
        source of the permutation

    Returns
    -------
    parts : list of int arrays
    """
    if minibatches < 1:
        raise ValueError('Number of minibatches must be positive, got {}'
                         .format(minibatches))
    parts = np.array_split(rng.permutation(n), min(minibatches, max(n, 1)))
    return [p for p in parts if p.size]
