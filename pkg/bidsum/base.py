# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Module with basic data structures - they are designed to be lightweight and immutable"""
import math

import numpy as np

from bidsum.const import (
    BUDGET_RATIO,
    CLIP_DURATION_S,
    EPS_S,
    FPS
)
from bidsum.exc import InvalidInput
from bidsum.fun import (
    check_disjoint,
    clip_count,
    frame_count,
    rasterize,
    total_duration
)

__all__ = ('ClipTimeline', 'Segment', 'FrameSelection', 'VMSummary', 'Rejection')


#{ Timeline Types

class ClipTimeline(tuple):

    """Per-clip saliency scores of a video sampled on a grid of fixed clip duration.

    It can be accessed using tuple notation and using attribute access notation::

        assert tl[0] == tl.scores
        assert tl[1] == tl.video_duration_s
        assert tl[2] == tl.clip_duration_s

    The number of scores always matches the number of clips, the last clip may be
    shorter than clip_duration_s."""
    __slots__ = tuple()

    def __new__(cls, scores, video_duration_s, clip_duration_s=CLIP_DURATION_S):
        scores = tuple(float(s) for s in scores)
        video_duration_s = float(video_duration_s)
        clip_duration_s = float(clip_duration_s)
        if not (video_duration_s > 0 and math.isfinite(video_duration_s)):
            raise InvalidInput("video duration must be positive, got %r" % video_duration_s)
        if not (clip_duration_s > 0 and math.isfinite(clip_duration_s)):
            raise InvalidInput("clip duration must be positive, got %r" % clip_duration_s)
        if not all(math.isfinite(s) for s in scores):
            raise InvalidInput("all scores must be finite")
        expected = clip_count(video_duration_s, clip_duration_s)
        if len(scores) != expected:
            raise InvalidInput("a %gs video at %gs clips needs %i scores, got %i"
                               % (video_duration_s, clip_duration_s, expected, len(scores)))
        return tuple.__new__(cls, (scores, video_duration_s, clip_duration_s))

    @classmethod
    def from_scores(cls, scores, clip_duration_s=CLIP_DURATION_S):
        """:return: timeline whose duration is exactly the number of scores times the clip duration"""
        scores = tuple(scores)
        if not scores:
            raise InvalidInput("cannot build a timeline from an empty score sequence")
        return cls(scores, len(scores) * clip_duration_s, clip_duration_s)

    #{ Interface
    @property
    def scores(self):
        return self[0]

    @property
    def video_duration_s(self):
        return self[1]

    @property
    def clip_duration_s(self):
        return self[2]

    @property
    def num_clips(self):
        return len(self[0])

    def clip_bounds(self, index):
        """:return: tuple(start_s, end_s) of the clip at the given index"""
        start = index * self[2]
        return start, min(start + self[2], self[1])

    def as_array(self):
        """:return: float64 numpy array of the scores"""
        return np.asarray(self[0], dtype=np.float64)

    def frame_scores(self, fps=FPS):
        """:return: float64 array with the score of the clip containing each frame center"""
        centers = (np.arange(frame_count(self[1], fps)) + 0.5) / fps
        idx = np.minimum((centers / self[2]).astype(np.int64), self.num_clips - 1)
        return self.as_array()[idx]
    #} END interface


class Segment(tuple):

    """A scored time interval [start_s, end_s) in seconds"""
    __slots__ = tuple()

    def __new__(cls, start_s, end_s, score):
        start_s, end_s = float(start_s), float(end_s)
        if not end_s > start_s:
            raise InvalidInput("segment end %g must be after its start %g" % (end_s, start_s))
        return tuple.__new__(cls, (start_s, end_s, float(score)))

    #{ Interface
    @property
    def start_s(self):
        return self[0]

    @property
    def end_s(self):
        return self[1]

    @property
    def score(self):
        return self[2]

    @property
    def duration(self):
        return self[1] - self[0]

    @property
    def mid(self):
        return (self[0] + self[1]) / 2.0

    @property
    def interval(self):
        return self[0], self[1]
    #} END interface


class FrameSelection(tuple):

    """Binary selection over the frames of a video sampled at fps"""
    __slots__ = tuple()

    def __new__(cls, fps, bits):
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise InvalidInput("frame selection bits must be 0 or 1")
        return tuple.__new__(cls, (float(fps), bits))

    #{ Interface
    @property
    def fps(self):
        return self[0]

    @property
    def bits(self):
        return self[1]

    @property
    def length(self):
        return len(self[1])

    def count_ones(self):
        return sum(self[1])

    def as_array(self):
        return np.asarray(self[1], dtype=np.int8)

    def as_string(self):
        """:return: the bits as string of '0' and '1' characters"""
        return ''.join('1' if b else '0' for b in self[1])
    #} END interface


class VMSummary(tuple):

    """The visual-modal summary: sorted, pairwise disjoint intervals whose total
    duration respects budget_ratio of the video duration"""
    __slots__ = tuple()

    def __new__(cls, intervals, video_duration_s, budget_ratio=BUDGET_RATIO):
        video_duration_s = float(video_duration_s)
        if not 0 <= budget_ratio <= 1:
            raise InvalidInput("budget ratio must be in [0, 1], got %r" % (budget_ratio, ))
        intervals = check_disjoint(intervals, video_duration_s)
        if total_duration(intervals) > budget_ratio * video_duration_s + EPS_S * max(1, len(intervals)):
            raise InvalidInput("summary of %gs exceeds %g of the %gs video"
                               % (total_duration(intervals), budget_ratio, video_duration_s))
        return tuple.__new__(cls, (intervals, video_duration_s, float(budget_ratio)))

    #{ Interface
    @property
    def intervals(self):
        return self[0]

    @property
    def video_duration_s(self):
        return self[1]

    @property
    def budget_ratio(self):
        return self[2]

    @property
    def total_duration(self):
        return total_duration(self[0])

    @property
    def coverage(self):
        """:return: fraction of the video covered by the summary"""
        return self.total_duration / self[1]

    def rasterize(self, fps=FPS):
        """:return: FrameSelection of this summary"""
        return rasterize(self[0], fps, self[1])
    #} END interface


class Rejection(tuple):

    """A video refused by the cleaning rules. The reason is one of the reason codes
    of the typ module, the detail a human readable explanation"""
    __slots__ = tuple()

    def __new__(cls, reason, detail=''):
        return tuple.__new__(cls, (reason, detail))

    @property
    def reason(self):
        return self[0]

    @property
    def detail(self):
        return self[1]

#} END timeline types
