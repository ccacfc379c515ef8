# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np

from ..errors import ConfigError

# (position, velocity) ranges of Mountain Car
MOUNTAIN_CAR_RANGES = ((-1.2, 0.6), (-0.07, 0.07))

# absorbs rounding when a point lies exactly on a bin edge
_EDGE_TOL = 1e-9


class CoverageGrid(object):
    """
    Regular grid over a 2D state subspace that counts visits per bin.

    Parameters
    ----------
    ranges : pair of (float, float)
        (low, high) range of each of the two dimensions
    bins : int
        number of bins per dimension

    Attributes
    ----------
    counts : numpy array of int
        cumulative visits, shape (bins, bins)
    """
    def __init__(self, ranges=MOUNTAIN_CAR_RANGES, bins=10):
        ranges = np.asarray(ranges, dtype=float)
        if ranges.shape != (2, 2):
            raise ConfigError('Coverage grid needs two (low, high) ranges, '
                              'got {}'.format(ranges.tolist()))
        if np.any(ranges[:, 1] <= ranges[:, 0]):
            raise ConfigError('Degenerate coverage range {}'
                              .format(ranges.tolist()))
        self.low = ranges[:, 0]
        self.high = ranges[:, 1]
        self.bins = int(bins)
        self.counts = np.zeros((self.bins, self.bins), dtype=int)

    def bin_index(self, point):
        """
        Bin (i, j) of a point; values outside the ranges go to the edge
        bins.

        The index is ``floor(bins * frac + 1e-9)`` rather than
        ``floor(bins * frac)``, so that points on a bin edge land in the
        upper bin despite rounding of *frac*. A point less than
        ``1e-9 / bins`` of the range below an edge is therefore also counted
        in the upper bin.
        """
        frac = (np.asarray(point, dtype=float)[:2] - self.low) / \
            (self.high - self.low)
        idx = np.clip(np.floor(self.bins * frac + _EDGE_TOL), 0,
                      self.bins - 1)
        return int(idx[0]), int(idx[1])

    @property
    def visited(self):
        return self.counts > 0

    @property
    def coverage(self):
        """Percentage of visited bins."""
        return 100.0 * np.count_nonzero(self.counts) / self.counts.size

    def update(self, point):
        """Record a visit and return the coverage percentage."""
        self.counts[self.bin_index(point)] += 1
        return self.coverage

    def merge(self, other):
        """Visits of both grids (same configuration) in a new grid."""
        if self.bins != other.bins or \
           not (np.array_equal(self.low, other.low) and
                np.array_equal(self.high, other.high)):
            raise ConfigError('Cannot merge differently configured grids')
        out = CoverageGrid(np.stack([self.low, self.high], axis=1),
                           self.bins)
        out.counts = self.counts + other.counts
        return out


def bin_index(s, grid):
    return grid.bin_index(s)


def coverage_update(grid, s):
    return grid.update(s)
