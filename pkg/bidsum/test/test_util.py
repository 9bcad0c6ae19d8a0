# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Test for utilities"""
import importlib
import os
import pkgutil

import bidsum

from bidsum.exc import (
    ParseError,
    UsageError
)
from bidsum.test.lib import (
    TestBase,
    read_bytes,
    with_rw_directory,
    write_text
)
from bidsum.util import (
    coerce_config,
    iter_lines,
    LockedFD,
    make_sha,
    read_config,
    stable_fraction,
    write_atomic
)


class TestUtils(TestBase):

    def test_every_module_imports(self):
        names = [m.name for m in pkgutil.walk_packages(bidsum.__path__, "bidsum.")]
        assert "bidsum.cli" in names and "bidsum.dataset" in names
        for name in names:
            importlib.import_module(name)
        # END for each module

    def test_stable_fraction(self):
        assert make_sha('abc').hexdigest() == make_sha(b'abc').hexdigest()
        values = [stable_fraction("vid%i" % i, 7) for i in range(200)]
        assert values == [stable_fraction("vid%i" % i, 7) for i in range(200)]
        assert all(0 <= v < 1 for v in values)
        assert len(set(values)) == len(values)
        assert stable_fraction('vid1', 0) != stable_fraction('vid1', 1)
        # roughly uniform
        assert 0.35 < sum(values) / len(values) < 0.65

    @with_rw_directory
    def test_iter_lines(self, path):
        fpath = write_text(os.path.join(path, 'lines'), "a\n\n  b  \n")
        assert list(iter_lines(fpath)) == [(1, 'a'), (3, 'b')]

    @with_rw_directory
    def test_config(self, path):
        fpath = write_text(os.path.join(path, 'conf'), "# comment\nbudget = 0.2\nmin-segment=3\n\n")
        config = read_config(fpath)
        assert config == {'budget': '0.2', 'min_segment': '3'}
        assert coerce_config(config, {'budget': float, 'min_segment': int}) == {'budget': 0.2, 'min_segment': 3}
        self.assertRaises(UsageError, coerce_config, config, {'budget': float})
        self.assertRaises(UsageError, coerce_config, {'budget': 'high'}, {'budget': float})

        write_text(fpath, "budget\n")
        try:
            read_config(fpath)
        except ParseError as e:
            assert e.line == 1 and e.path == fpath
            assert str(e).startswith("%s:1: " % fpath)
        else:
            self.fail("expected a parse error")
        # END handle error

    @with_rw_directory
    def test_lockedfd(self, path):
        my_file = write_text(os.path.join(path, 'target'), "hello")
        lfd = LockedFD(my_file)
        lockfilepath = lfd._lockfilepath()

        # cannot end before it was started
        self.assertRaises(AssertionError, lfd.rollback)
        self.assertRaises(AssertionError, lfd.commit)

        stream = lfd.open()
        assert os.path.isfile(lockfilepath)
        self.assertRaises(AssertionError, lfd.open)

        # a second writer cannot obtain the lock
        self.assertRaises(IOError, LockedFD(my_file).open)

        stream.write(b"world")
        lfd.rollback()
        assert read_bytes(my_file) == b"hello"
        assert not os.path.isfile(lockfilepath)
        # additional call doesn't fail
        lfd.commit()

        with LockedFD(my_file) as stream:
            stream.write(b"world")
        assert read_bytes(my_file) == b"world"
        assert not os.path.isfile(lockfilepath)

        try:
            with LockedFD(my_file) as stream:
                stream.write(b"partial")
                raise ValueError("interrupted")
        except ValueError:
            pass
        assert read_bytes(my_file) == b"world"
        assert not os.path.isfile(lockfilepath)

    @with_rw_directory
    def test_write_atomic(self, path):
        target = os.path.join(path, 'out.txt')
        assert write_atomic(target, "café\n") == 6
        assert read_bytes(target) == "café\n".encode('utf-8')
        write_atomic(target, b"bytes")
        assert read_bytes(target) == b"bytes"
