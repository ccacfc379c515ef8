# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import gzip
import os
import struct

import numpy as np
from numpy.testing import assert_allclose, assert_equal
import pytest

import lbs.tools.io as lio
from lbs.errors import IdxFormatError
from lbs.latent import LbsModel

DATA_DIR = os.path.join(os.path.split(__file__)[0], 'data')


def _idx_bytes(header, dims, payload):
    return bytes(bytearray(header)) + struct.pack('>' + 'I' * len(dims),
                                                  *dims) + payload


def _write(path, data):
    with open(path, 'wb') as f:
        f.write(data)
    return path


def test_io_idx_images(tmp_path):
    pixels = bytes(bytearray(range(2 * 3 * 4)))
    path = _write(str(tmp_path / 'images'),
                  _idx_bytes([0, 0, 8, 3], [2, 3, 4], pixels))
    images = lio.load_idx(path, 'images')
    assert_equal(images.dtype, np.uint8)
    assert_equal(images.shape, (2, 3, 4))
    assert_equal(images[1, 2, 3], 23)

    with gzip.open(path + '.gz', 'wb') as f:
        f.write(_idx_bytes([0, 0, 8, 3], [2, 3, 4], pixels))
    assert_equal(lio.load_idx(path + '.gz'), images)


def test_io_idx_errors(tmp_path):
    path = str(tmp_path / 'bad')
    _write(path, _idx_bytes([0, 0, 8, 5], [2, 3, 4], bytes(24)))
    with pytest.raises(IdxFormatError) as e:
        lio.load_idx(path)
    assert_equal(e.value.offset, 0)
    assert 'byte offset 0' in str(e.value)

    # labels magic where images are expected
    _write(path, _idx_bytes([0, 0, 8, 1], [3], bytes(3)))
    with pytest.raises(IdxFormatError):
        lio.load_idx(path, 'images')

    _write(path, bytes(bytearray([0, 0, 8])))
    with pytest.raises(IdxFormatError) as e:
        lio.load_idx(path)
    assert_equal(e.value.offset, 3)

    data = _idx_bytes([0, 0, 8, 3], [2, 3, 4], bytes(20))
    _write(path, data)
    with pytest.raises(IdxFormatError) as e:
        lio.load_idx(path)
    assert_equal(e.value.offset, len(data))
    assert_equal(e.value.path, path)

    _write(path, _idx_bytes([0, 0, 8, 3], [2, 3, 4], bytes(25)))
    with pytest.raises(IdxFormatError) as e:
        lio.load_idx(path)
    assert_equal(e.value.offset, 16 + 24)


def test_io_labeled_idx(tmp_path):
    images = str(tmp_path / 'images')
    labels = str(tmp_path / 'labels')
    _write(images, _idx_bytes([0, 0, 8, 3], [3, 2, 2],
                              bytes(bytearray([255] * 12))))
    _write(labels, _idx_bytes([0, 0, 8, 1], [3], bytes(bytearray([7, 0, 1]))))
    x, y = lio.load_labeled_idx(images, labels, pool=True)
    assert_equal(x.shape, (3, 1, 1))
    assert_allclose(x, 1.0, rtol=1e-15)
    assert_equal(y, [7, 0, 1])

    _write(labels, _idx_bytes([0, 0, 8, 1], [2], bytes(2)))
    with pytest.raises(IdxFormatError) as e:
        lio.load_labeled_idx(images, labels)
    assert_equal(e.value.offset, 4)


def test_io_pool2x2():
    im = np.arange(16.0).reshape(1, 4, 4)
    assert_allclose(lio.pool2x2(im)[0], [[2.5, 4.5], [10.5, 12.5]],
                    rtol=1e-15)
    with pytest.raises(ValueError):
        lio.pool2x2(np.zeros((1, 3, 4)))


def test_io_checkpoint(tmp_path):
    rng = np.random.default_rng(0)
    m = LbsModel(2, 1, rng=rng)
    path = str(tmp_path / 'model.npz')
    lio.save_checkpoint(path, m.state_dict(), 'abc123', 'lbs')
    state, meta = lio.load_checkpoint(path, 'abc123')
    assert_equal(meta, {'format': lio.CHECKPOINT_FORMAT,
                        'config_hash': 'abc123', 'kind': 'lbs'})
    other = LbsModel(2, 1, rng=rng)
    other.load_state_dict(state)
    for name, value in m.state_dict().items():
        assert_equal(other.state_dict()[name], value, err_msg=name)

    with pytest.raises(ValueError):
        lio.load_checkpoint(path, 'other')


def test_io_data_dir(monkeypatch):
    monkeypatch.delenv(lio.DATA_DIR_ENV, raising=False)
    lio.set_data_dir('')
    assert_equal(lio.get_data_dir(), lio.default_data_dir())
    assert lio.default_data_dir().endswith('mnist')
    lio.set_data_dir(DATA_DIR)
    assert_equal(lio.get_data_dir(), DATA_DIR)
    monkeypatch.setenv(lio.DATA_DIR_ENV, '/somewhere/else')
    assert_equal(lio.get_data_dir(), '/somewhere/else')
    lio.set_data_dir('')


if __name__ == '__main__':
    import tempfile
    import pathlib
    test_io_idx_images(pathlib.Path(tempfile.mkdtemp()))
    test_io_idx_errors(pathlib.Path(tempfile.mkdtemp()))
    test_io_labeled_idx(pathlib.Path(tempfile.mkdtemp()))
    test_io_pool2x2()
    test_io_checkpoint(pathlib.Path(tempfile.mkdtemp()))
