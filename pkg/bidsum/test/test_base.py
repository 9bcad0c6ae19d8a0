# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Test for the basic timeline types"""
from bidsum.base import (
    ClipTimeline,
    FrameSelection,
    Rejection,
    Segment,
    VMSummary
)
from bidsum.exc import InvalidInput
from bidsum.test.lib import TestBase


class TestBaseTypes(TestBase):

    def test_timeline(self):
        tl = ClipTimeline([1, 2, 3], 5.0)
        assert tl.scores == (1.0, 2.0, 3.0)
        assert tl.num_clips == 3
        assert tl.clip_bounds(0) == (0.0, 2.0)
        assert tl.clip_bounds(2) == (4.0, 5.0)
        assert tl[1] == tl.video_duration_s == 5.0

        assert ClipTimeline.from_scores([1, 2, 3]).video_duration_s == 6.0
        self.assert_close(ClipTimeline([0, 1], 4.0).frame_scores(1), [0, 0, 1, 1])

        self.assertRaises(InvalidInput, ClipTimeline, [1, 2], 5.0)
        self.assertRaises(InvalidInput, ClipTimeline, [1, float('inf'), 2], 6.0)
        self.assertRaises(InvalidInput, ClipTimeline, [1], 0)
        self.assertRaises(InvalidInput, ClipTimeline, [1], 2.0, 0)

    def test_segment(self):
        seg = Segment(6, 14, 2)
        assert seg.duration == 8.0 and seg.mid == 10.0
        assert seg.interval == (6.0, 14.0)
        self.assertRaises(InvalidInput, Segment, 4, 4, 1)
        self.assertRaises(InvalidInput, Segment, 5, 4, 1)

    def test_frame_selection(self):
        sel = FrameSelection(8, [0, 1, 1, 0])
        assert sel.length == 4 and sel.count_ones() == 2
        assert sel.as_string() == '0110'
        self.assertRaises(InvalidInput, FrameSelection, 8, [0, 2])

    def test_summary(self):
        summary = VMSummary([(0, 1.5)], 10.0)
        assert summary.total_duration == 1.5
        self.assert_close(summary.coverage, 0.15)
        assert summary.rasterize(2).count_ones() == 3

        # budget is checked in continuous seconds
        self.assertRaises(InvalidInput, VMSummary, [(0, 2)], 10.0)
        self.assertRaises(InvalidInput, VMSummary, [(0, 1)], 10.0, 1.5)
        self.assertRaises(InvalidInput, VMSummary, [(0, 1), (0.5, 1.2)], 10.0)
        assert VMSummary([], 10.0, 0).total_duration == 0

    def test_rejection(self):
        rej = Rejection('low_coverage', 'detail')
        assert rej.reason == 'low_coverage' and rej.detail == 'detail'
