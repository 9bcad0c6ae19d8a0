# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Utilities used in bidsum testing"""
import gc
import json
import os
import shutil
import sys
import tempfile
import unittest
from functools import wraps

import numpy as np

from bidsum.base import ClipTimeline


#{ Bases

class TestBase(unittest.TestCase):
    """Base class for all tests

    Provides a seeded numpy generator as ``self.rng``, reset for every test"""

    #{ Invariants
    k_seed = 42
    #} END invariants

    def setUp(self):
        super(TestBase, self).setUp()
        self.rng = np.random.default_rng(self.k_seed)

    def assert_close(self, actual, expected, tol=1e-9):
        np.testing.assert_allclose(actual, expected, rtol=0, atol=tol)

#} END bases


#{ Decorators

def skip_if_slow(func):
    """All tests decorated with this one will be skipped if BIDSUM_SKIP_SLOW is set.
    Use it for statistical experiments which take minutes"""
    @wraps(func)
    def wrapper(self, *args, **kwargs):
        if os.environ.get('BIDSUM_SKIP_SLOW'):
            import pytest
            pytest.skip("slow experiment skipped as BIDSUM_SKIP_SLOW is set")
        # end check for slow mode
        return func(self, *args, **kwargs)
    # end wrapper
    return wrapper


def with_rw_directory(func):
    """Create a temporary directory which can be written to, remove it if the
    test succeeds, but leave it otherwise to aid additional debugging"""

    def wrapper(self):
        path = tempfile.mkdtemp(prefix=func.__name__)
        keep = False
        try:
            try:
                return func(self, path)
            except Exception:
                sys.stderr.write("Test {}.{} failed, output is at {!r}\n".format(type(self).__name__, func.__name__, path))
                keep = True
                raise
        finally:
            if not keep:
                gc.collect()
                shutil.rmtree(path)
        # END handle exception
    # END wrapper

    wrapper.__name__ = func.__name__
    return wrapper

#} END decorators


#{ Routines

def fixture_path(relapath=''):
    """:return: absolute path into the fixture directory
    :param relapath: relative path into the fixtures directory, or ''
        to obtain the fixture directory itself"""
    return os.path.join(os.path.dirname(__file__), 'fixtures', relapath)


def load_fixture_json(relapath):
    with open(fixture_path(relapath), 'r', encoding='utf-8') as fp:
        return json.load(fp)


def read_bytes(filepath):
    with open(filepath, 'rb') as fp:
        return fp.read()


def write_text(filepath, text):
    with open(filepath, 'w', encoding='utf-8') as fp:
        fp.write(text)
    return filepath


def make_timeline(rng, num_clips, levels=5, run_length=3, clip_duration_s=2.0):
    """:return: ClipTimeline of integer scores in [0, levels) arranged in runs of
        random length up to run_length, so neighbouring clips often share a score"""
    scores = list()
    while len(scores) < num_clips:
        scores.extend([int(rng.integers(0, levels))] * int(rng.integers(1, run_length + 1)))
    return ClipTimeline.from_scores(scores[:num_clips], clip_duration_s)


def make_peaked_timeline(rng, num_clips, peak_clips, clip_duration_s=2.0):
    """:return: ClipTimeline of random scores in [0, 3] with one run of peak_clips
        clips of score 4 at a random position"""
    scores = [float(s) for s in rng.integers(0, 4, size=num_clips)]
    start = int(rng.integers(0, num_clips - peak_clips + 1))
    for i in range(start, start + peak_clips):
        scores[i] = 4.0
    return ClipTimeline.from_scores(scores, clip_duration_s)


def numerical_gradient(func, x, step=1e-5):
    """:return: central finite difference gradient of the scalar func at x
    :param x: float64 array, modified in place during evaluation and restored"""
    grad = np.zeros_like(x)
    flat = x.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + step
        plus = func()
        flat[i] = orig - step
        minus = func()
        flat[i] = orig
        gflat[i] = (plus - minus) / (2.0 * step)
    # END for each element
    return grad

#} END routines
