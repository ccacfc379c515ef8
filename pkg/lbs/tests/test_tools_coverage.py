# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np
from numpy.testing import assert_allclose, assert_equal
import pytest

from lbs.errors import ConfigError
from lbs.tools.coverage import CoverageGrid, bin_index, coverage_update


def test_coverage_bin_index():
    grid = CoverageGrid()
    assert_equal(bin_index((-1.2, -0.07), grid), (0, 0))
    assert_equal(bin_index((0.6, 0.07), grid), (9, 9))
    assert_equal(bin_index((-0.3, 0.0), grid), (5, 5))
    assert_equal(bin_index((-1.0, 0.069), grid), (1, 9))
    # within 1e-10 of the range below an edge counts as on the edge
    assert_equal(bin_index((-1.2 + 1.8 * (0.3 - 1e-11), 0.0), grid)[0], 3)
    assert_equal(bin_index((-1.2 + 1.8 * (0.3 - 1e-8), 0.0), grid)[0], 2)
    # extra dimensions (the noisy state) are ignored
    assert_equal(bin_index((-0.3, 0.0, 0.7), grid), (5, 5))


def test_coverage_bin_index_total():
    grid = CoverageGrid()
    rng = np.random.default_rng(0)
    points = np.vstack([rng.normal(scale=100, size=(1000, 2)),
                        [[np.inf, -np.inf], [-1e300, 1e300]]])
    for p in points:
        i, j = grid.bin_index(p)
        assert 0 <= i < 10 and 0 <= j < 10


def test_coverage_update():
    grid = CoverageGrid()
    assert_allclose(coverage_update(grid, (-0.5, 0.0)), 1.0, rtol=1e-15)
    assert_allclose(coverage_update(grid, (-0.5, 0.0)), 1.0, rtol=1e-15)
    assert_equal(grid.counts.sum(), 2)

    rng = np.random.default_rng(1)
    previous = grid.coverage
    for p in rng.uniform((-1.2, -0.07), (0.6, 0.07), (3000, 2)):
        c = grid.update(p)
        assert c >= previous
        previous = c
    # every bin touched
    for i in range(10):
        for j in range(10):
            grid.update((-1.2 + 0.18 * (i + 0.5), -0.07 + 0.014 * (j + 0.5)))
    assert_allclose(grid.coverage, 100.0, rtol=1e-15)
    assert grid.visited.all()


def test_coverage_merge_and_errors():
    a, b = CoverageGrid(), CoverageGrid()
    a.update((-1.2, -0.07))
    b.update((0.6, 0.07))
    b.update((0.6, 0.07))
    m = a.merge(b)
    assert_allclose(m.coverage, 2.0, rtol=1e-15)
    assert_equal(m.counts.sum(), 3)

    with pytest.raises(ConfigError):
        CoverageGrid(((0.0, 0.0), (0.0, 1.0)))
    with pytest.raises(ConfigError):
        a.merge(CoverageGrid(bins=5))


if __name__ == '__main__':
    test_coverage_bin_index()
    test_coverage_bin_index_total()
    test_coverage_update()
    test_coverage_merge_and_errors()
