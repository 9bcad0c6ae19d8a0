# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
import hashlib
import os
import sys
import time

from bidsum.exc import (
    ParseError,
    UsageError
)

__all__ = ('join', 'force_bytes', 'make_sha', 'stable_fraction', 'LazyMixin', 'LockedFD', 'write_atomic',
           'iter_lines', 'read_config', 'coerce_config')


#{ Aliases

join = os.path.join

#} END aliases


#{ Routines

def force_bytes(data, encoding="utf-8"):
    """:return: data as bytes, text is encoded with the given encoding"""
    if isinstance(data, bytes):
        return data
    return data.encode(encoding)


def make_sha(source=b''):
    """:return: sha1 hash object over the given bytes or text"""
    return hashlib.sha1(force_bytes(source))


def stable_fraction(key, seed=0):
    """:return: float in [0, 1) derived from the sha1 of key and seed. It is stable
        across runs, platforms and python versions, which makes it suitable to
        assign items to buckets without a random number generator"""
    digest = make_sha("%s:%s" % (seed, key)).hexdigest()
    # 52 bits fit into the mantissa of a double exactly
    return int(digest[:13], 16) / float(16 ** 13)


def iter_lines(filepath):
    """Iterate the non-empty lines of a text file

    :return: iterator yielding tuple(line_number, stripped_line), line numbers are 1-based
    :raise OSError: if the file cannot be opened"""
    with open(filepath, 'r', encoding='utf-8') as fp:
        for lineno, line in enumerate(fp, 1):
            line = line.strip()
            if not line:
                continue
            yield lineno, line
        # END for each line
    # END assure file is closed


def read_config(filepath):
    """Read a configuration file of ``key = value`` lines.

    Blank lines and lines starting with ``#`` are ignored, dashes in keys are
    turned into underscores.

    :return: dict mapping keys to their string values
    :raise ParseError: if a line is not of the ``key = value`` form"""
    config = dict()
    for lineno, line in iter_lines(filepath):
        if line.startswith('#'):
            continue
        key, sep, value = line.partition('=')
        key = key.strip().replace('-', '_')
        if not sep or not key:
            raise ParseError("expected 'key = value', got %r" % line, filepath, lineno)
        config[key] = value.strip()
    # END for each line
    return config


def coerce_config(config, types):
    """Convert the string values of a configuration dict using the given types

    :param types: dict mapping known keys to a callable converting the string value
    :return: new dict with converted values
    :raise UsageError: on unknown keys or values which cannot be converted"""
    out = dict()
    for key, value in config.items():
        if key not in types:
            raise UsageError("unknown configuration key '%s'" % key)
        try:
            out[key] = types[key](value)
        except ValueError as e:
            raise UsageError("invalid value %r for configuration key '%s'" % (value, key)) from e
    # END for each item
    return out

#} END routines


#{ Utilities

class LazyMixin(object):

    """Computes attributes on first access.

    Subclasses implement ``_set_cache_`` to assign the requested attribute, which
    is then served from the instance dict or slot like any other attribute.
    """

    __slots__ = tuple()

    def __getattr__(self, attr):
        # only called for attributes which are not set yet
        self._set_cache_(attr)
        return object.__getattribute__(self, attr)

    def _set_cache_(self, attr):
        """Assign the attribute named attr if this type knows how to compute it,
        otherwise leave it unset so the lookup raises AttributeError"""


def _replace(src, dst):
    # on windows, scanners and indexers may briefly hold the target open
    for _ in range(9 if sys.platform == "win32" else 0):
        try:
            return os.replace(src, dst)
        except OSError:
            time.sleep(0.1)
    # END retry
    return os.replace(src, dst)


class LockedFD(object):

    """Writes a file through ``<path>.lock``.

    The lock file is created exclusively, so a second writer of the same path
    fails. On commit it replaces the target, on rollback it is removed and the
    target keeps its previous content. Used as a context manager it commits when
    the block succeeds and rolls back otherwise::

        with LockedFD(path) as stream:
            stream.write(data)
    """
    __slots__ = ('_filepath', '_fd', '_stream', '_opened')

    # CONFIGURATION
    # permissions of committed files
    file_mode = 0o644
    # END CONFIGURATION

    def __init__(self, filepath):
        self._filepath = filepath
        self._fd = None
        self._stream = None
        self._opened = False

    def __del__(self):
        if self._fd is not None:
            self.rollback()

    def __enter__(self):
        return self.open()

    def __exit__(self, exc_type, exc_value, traceback):
        self._finish(exc_type is None)
        return False

    def _lockfilepath(self):
        return self._filepath + '.lock'

    def open(self):
        """:return: binary stream writing into the lock file. It belongs to this
            instance, close it through commit or rollback
        :raise IOError: if the lock file exists already"""
        if self._opened:
            raise AssertionError("%r was opened before" % self)
        self._opened = True

        flags = os.O_WRONLY | os.O_CREAT | os.O_EXCL | getattr(os, 'O_BINARY', 0)
        try:
            self._fd = os.open(self._lockfilepath(), flags, 0o600)
        except OSError as e:
            raise IOError("could not lock %r, is another writer active?" % self._filepath) from e
        # END handle lock
        self._stream = os.fdopen(self._fd, 'wb', closefd=False)
        return self._stream

    def commit(self):
        """Move the written data into place. Calling it again does nothing"""
        self._finish(True)

    def rollback(self):
        """Drop the written data. Calling it again does nothing"""
        self._finish(False)

    def _finish(self, successful):
        if not self._opened:
            raise AssertionError("%r was never opened" % self)
        if self._fd is None:
            return

        self._stream.close()
        self._stream = None
        if successful:
            os.fsync(self._fd)
        os.close(self._fd)
        self._fd = None

        if successful:
            _replace(self._lockfilepath(), self._filepath)
            os.chmod(self._filepath, self.file_mode)
        else:
            os.remove(self._lockfilepath())
        # END move or drop lock file


def write_atomic(filepath, data):
    """Write the given text or bytes to filepath using a LockedFD

    :return: number of bytes written"""
    data = force_bytes(data)
    with LockedFD(filepath) as stream:
        stream.write(data)
    return len(data)

#} END utilities
