# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import gzip
import os
import platform
import struct

import numpy as np

from ..errors import IdxFormatError

# Loading of IDX datasets, model checkpoints, and the dataset directory.

IMAGES_MAGIC = 2051  # 0x00000803: unsigned bytes, 3 dimensions
LABELS_MAGIC = 2049  # 0x00000801: unsigned bytes, 1 dimension

_KINDS = {'images': IMAGES_MAGIC, 'labels': LABELS_MAGIC}


def _read_bytes(path):
    opener = gzip.open if path.endswith('.gz') else open
    with opener(path, 'rb') as f:
        return f.read()


def load_idx(path, kind=None):
    """
    Parse a big-endian IDX file of images or labels.

    Parameters
    ----------
    path : str
        file name (``.gz`` files are decompressed)
    kind : str or None
        ``'images'`` (magic 2051) or ``'labels'`` (magic 2049);
        ``None`` accepts either

    Returns
    -------
    data : numpy array of uint8
        shape (*n*, rows, cols) for images, (*n*,) for labels

    Raises
    ------
    IdxFormatError
        bad magic, truncated header or data, trailing bytes; the byte
        offset of the problem is in the message
    """
    data = _read_bytes(path)
    if len(data) < 4:
        raise IdxFormatError('Truncated IDX header', path, len(data))
    magic, = struct.unpack('>I', data[:4])
    allowed = [_KINDS[kind]] if kind else list(_KINDS.values())
    if magic not in allowed:
        raise IdxFormatError('Bad IDX magic 0x{:08X} (expected {})'.format(
            magic, ' or '.join('0x{:08X}'.format(m) for m in allowed)),
            path, 0)

    ndim = magic & 0xFF
    header = 4 + 4 * ndim
    if len(data) < header:
        raise IdxFormatError('Truncated IDX header', path, len(data))
    dims = struct.unpack('>' + 'I' * ndim, data[4:header])
    size = int(np.prod(dims))
    if len(data) < header + size:
        raise IdxFormatError('Truncated IDX data: {} of {} bytes'.format(
            len(data) - header, size), path, len(data))
    if len(data) > header + size:
        raise IdxFormatError('Trailing bytes after IDX data', path,
                             header + size)
    return np.frombuffer(data, dtype=np.uint8, count=size,
                         offset=header).reshape(dims)


def pool2x2(images):
    """2×2 mean pooling of a stack of images (n, rows, cols)."""
    n, rows, cols = images.shape
    if rows % 2 or cols % 2:
        raise ValueError('Cannot pool {}×{} images 2×2'.format(rows, cols))
    return images.reshape(n, rows // 2, 2, cols // 2, 2).mean(axis=(2, 4))


def load_labeled_idx(images_path, labels_path, pool=False):
    """
    Images (scaled to [0, 1]) and labels from a pair of IDX files.

    Parameters
    ----------
    images_path, labels_path : str
        IDX files (magics 2051 and 2049)
    pool : bool
        downsample the images by 2×2 mean pooling (28×28 → 14×14)

    Returns
    -------
    images : numpy array
        shape (*n*, rows, cols), float
    labels : numpy array
        shape (*n*,), int
    """
    images = load_idx(images_path, 'images').astype(float) / 255
    labels = load_idx(labels_path, 'labels').astype(int)
    if images.shape[0] != labels.shape[0]:
        # offset of the label count in the labels file
        raise IdxFormatError('{} labels for {} images'.format(
            labels.shape[0], images.shape[0]), labels_path, 4)
    if pool:
        images = pool2x2(images)
    return images, labels


# Checkpoints: .npz archives of named parameter arrays plus metadata.

CHECKPOINT_FORMAT = 1


def save_checkpoint(path, state, config_hash='', kind=''):
    """
    Save model parameters.

    Parameters
    ----------
    path : str
        output file (``.npz``)
    state : dict of numpy array
        parameters by name (a model's ``state_dict()``)
    config_hash : str
        hash of the configuration that produced the model
    kind : str
        model type (e.g. the exploration method)
    """
    arrays = {'param/' + name: value for name, value in state.items()}
    np.savez(path, __format__=np.array(CHECKPOINT_FORMAT),
             __config_hash__=np.array(config_hash),
             __kind__=np.array(kind), **arrays)


def load_checkpoint(path, config_hash=None):
    """
    Load model parameters saved by :func:`save_checkpoint`.

    Parameters
    ----------
    path : str
        checkpoint file
    config_hash : str or None
        if given, must match the stored hash

    Returns
    -------
    state : dict of numpy array
        parameters by name
    meta : dict
        ``'format'``, ``'config_hash'`` and ``'kind'``
    """
    with np.load(path) as f:
        version = int(f['__format__'])
        if version != CHECKPOINT_FORMAT:
            raise ValueError('Unsupported checkpoint format {} in "{}"'
                             .format(version, path))
        meta = {'format': version,
                'config_hash': str(f['__config_hash__']),
                'kind': str(f['__kind__'])}
        state = {name[6:]: f[name] for name in f.files
                 if name.startswith('param/')}
    if config_hash is not None and meta['config_hash'] != config_hash:
        raise ValueError('Checkpoint "{}" was made with configuration {}, '
                         'not {}'.format(path, meta['config_hash'],
                                         config_hash))
    return state, meta


# Dataset directory.
# used by set_data_dir() and get_data_dir().
_data_dir = ''

DATA_DIR_ENV = 'LBS_DATA_DIR'


def set_data_dir(data_dir=''):
    """
    Changes the path to the directory with the MNIST IDX files.

    Parameters
    ----------
    data_dir : str
        absolute or relative path. Use ``''`` for the system-dependent
        default path, see :func:`default_data_dir`.

    Returns
    -------
    None
    """
    global _data_dir
    _data_dir = data_dir


def get_data_dir():
    """
    Gets the path to the directory with the MNIST IDX files: the
    ``LBS_DATA_DIR`` environment variable if set, otherwise the path from
    :func:`set_data_dir`, otherwise :func:`default_data_dir`.

    Returns
    -------
    path : str
    """
    env = os.getenv(DATA_DIR_ENV)
    if env:
        return env
    return _data_dir or default_data_dir()


def default_data_dir():
    r"""
    Gets full path to the system-dependent default dataset directory:

    Linux (and other Unix-like):
        ``~/.cache/PyLBS/mnist`` (or ``$XDG_CACHE_HOME/PyLBS/mnist`` if set)
    macOS:
        ``/Users/<user>/Library/Caches/PyLBS/mnist``
    Windows:
        ``<user profile>\AppData\Local\PyLBS\cache\mnist`` (or
        ``%LOCALAPPDATA%\PyLBS\cache\mnist`` if set)

    Returns
    -------
    path : str
    """
    system = platform.system()

    if system == 'Darwin':  # macOS
        return os.path.expanduser('~/Library/Caches/PyLBS/mnist')

    if system == 'Windows':
        return os.path.join(os.getenv('LOCALAPPDATA',
                                      os.path.expanduser(r'~\AppData\Local')),
                            r'PyLBS\cache\mnist')

    # Linux and other
    return os.path.join(os.getenv('XDG_CACHE_HOME',
                                  os.path.expanduser('~/.cache')),
                        'PyLBS', 'mnist')
