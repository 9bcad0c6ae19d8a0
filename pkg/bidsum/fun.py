# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Contains the timeline algebra every other module builds upon: clip grids,
segments, frame selections and score normalization.

All routines are pure functions over immutable inputs"""
import math

import numpy as np

from bidsum.const import (
    EPS_S,
    FPS
)
from bidsum.exc import InvalidInput

__all__ = ('clip_count', 'frame_count', 'merge_clips', 'expand_segments', 'rasterize',
           'normalize_scores', 'total_duration', 'check_disjoint')


#{ Routines

def clip_count(video_duration_s, clip_duration_s):
    """:return: number of clips covering a video of the given duration, the last
        clip may be partial"""
    return int(math.ceil(video_duration_s / clip_duration_s - EPS_S))


def frame_count(video_duration_s, fps):
    """:return: number of frames of a video sampled at fps"""
    return int(round(video_duration_s * fps))


def total_duration(intervals):
    """:return: summed length of the given (start, end) intervals in seconds"""
    return math.fsum(end - start for start, end in intervals)


def check_disjoint(intervals, video_duration_s=None):
    """Assure intervals are well formed, pairwise disjoint and within the video

    :return: the intervals sorted by start time, as tuple of tuples
    :raise InvalidInput: on empty or reversed intervals, overlaps, or bounds violations"""
    ordered = tuple(sorted((float(s), float(e)) for s, e in intervals))
    prev_end = None
    for start, end in ordered:
        if not end > start:
            raise InvalidInput("interval (%g, %g) is empty or reversed" % (start, end))
        if start < -EPS_S:
            raise InvalidInput("interval (%g, %g) starts before the video" % (start, end))
        if video_duration_s is not None and end > video_duration_s + EPS_S:
            raise InvalidInput("interval (%g, %g) ends after the video end at %g"
                               % (start, end, video_duration_s))
        if prev_end is not None and start < prev_end - EPS_S:
            raise InvalidInput("interval (%g, %g) overlaps its predecessor ending at %g"
                               % (start, end, prev_end))
        prev_end = end
    # END for each interval
    return ordered


def merge_clips(timeline):
    """Merge runs of adjacent clips with identical scores into segments

    :param timeline: ClipTimeline
    :return: list of Segment instances partitioning [0, video_duration_s], neighbours
        always differ in score
    :raise InvalidInput: if the timeline carries no scores"""
    from bidsum.base import Segment
    scores = timeline.scores
    if not scores:
        raise InvalidInput("cannot merge an empty score sequence")

    clip = timeline.clip_duration_s
    duration = timeline.video_duration_s
    segments = list()
    run_start = 0
    for i in range(1, len(scores) + 1):
        if i < len(scores) and scores[i] == scores[run_start]:
            continue
        start = run_start * clip
        end = min(i * clip, duration)
        segments.append(Segment(start, end, scores[run_start]))
        run_start = i
    # END for each clip boundary
    return segments


def expand_segments(segments, clip_duration_s):
    """Inverse of merge_clips

    :return: tuple of per-clip scores covered by the given segments"""
    scores = list()
    for seg in segments:
        scores.extend([seg.score] * clip_count(seg.duration, clip_duration_s))
    return tuple(scores)


def rasterize(intervals, fps=FPS, video_duration_s=None):
    """Turn intervals in seconds into a frame-level selection.

    Frame i is selected if its center time (i + 0.5) / fps lies within a half-open
    interval [start, end).

    :param video_duration_s: duration of the video, required
    :return: FrameSelection
    :raise InvalidInput: if intervals overlap or exceed the video"""
    from bidsum.base import FrameSelection
    if video_duration_s is None:
        raise InvalidInput("rasterize requires the video duration")
    if fps <= 0:
        raise InvalidInput("fps must be positive, got %r" % (fps, ))
    ordered = check_disjoint(intervals, video_duration_s)

    centers = (np.arange(frame_count(video_duration_s, fps)) + 0.5) / fps
    bits = np.zeros(len(centers), dtype=np.int8)
    for start, end in ordered:
        bits[(centers >= start) & (centers < end)] = 1
    # END for each interval
    return FrameSelection(fps, bits)


def normalize_scores(scores):
    """Min-max normalize a score sequence into [0, 1]. A constant sequence maps
    to all zeros

    :return: float64 numpy array of the same length
    :raise InvalidInput: if scores are empty or not finite"""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInput("normalize_scores requires a non-empty 1d sequence")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("scores must be finite")

    lo = arr.min()
    span = arr.max() - lo
    if span == 0:
        return np.zeros_like(arr)
    return (arr - lo) / span

#} END routines
