# -*- coding: utf-8 -*-
"""
Exceptions raised by PyLBS.

All of them derive from the standard exception that the same problem would
raise in NumPy (``ValueError`` or ``FloatingPointError``), so callers that
only catch those keep working.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np


class ShapeError(ValueError):
    """Input-shape, dimension-mismatch or calling-contract violation."""


class NumericalError(FloatingPointError):
    """A loss, gradient or parameter became NaN or infinite."""


class ConfigError(ValueError):
    """Invalid experiment configuration (unknown key, bad value, bad id)."""


class DatasetError(ValueError):
    """A dataset does not provide what a task needs (e.g. a digit class)."""


class IdxFormatError(ValueError):
    """
    Malformed IDX file.

    Parameters
    ----------
    msg : str
        description of the problem
    path : str
        file being parsed
    offset : int
        byte offset at which the problem was detected
    """
    def __init__(self, msg, path='', offset=0):
        self.path = path
        self.offset = offset
        super(IdxFormatError, self).__init__(
            '{} (file "{}", byte offset {})'.format(msg, path, offset))


def check_finite(value, what):
    """
    Raise :class:`NumericalError` if **value** contains NaN or infinity.

    Parameters
    ----------
    value : float or numpy array
        quantity to check
    what : str
        name of the quantity, used in the diagnostic
    """
    value = np.asarray(value)
    if not np.all(np.isfinite(value)):
        bad = np.size(value) - np.count_nonzero(np.isfinite(value))
        raise NumericalError('Non-finite {}: {} of {} entries are NaN/inf'
                             .format(what, bad, np.size(value)))
