# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Selection of visual-modal summaries from per-clip saliency.

Two selectors are provided: the level-wise ranking and scaling extractor used
to build summaries, and the classical 0/1 knapsack over whole segments which
serves as baseline"""
import logging
import math

import numpy as np

from bidsum.base import (
    Rejection,
    VMSummary
)
from bidsum.const import (
    BUDGET_RATIO,
    CLIP_DURATION_S,
    EPS_S,
    FPS,
    MIN_COVERAGE,
    MIN_SEGMENT_S
)
from bidsum.exc import InvalidInput
from bidsum.fun import (
    clip_count,
    merge_clips,
    total_duration
)
from bidsum.typ import (
    str_reject_low_coverage,
    str_reject_no_segments
)

log = logging.getLogger(__name__)

__all__ = ('scale_segment', 'extract_vm_summary', 'knapsack_summary', 'clean_summary',
           'select_frames', 'score_levels')


#{ Routines

def scale_segment(seg, left_neighbor_score, right_neighbor_score, allotted_length):
    """Shrink a segment to the allotted length, keeping the part adjacent to
    higher scored neighbours.

    * both neighbours higher: two halves flush against both boundaries
    * one neighbour higher: one interval flush against that neighbour
    * no neighbour higher: one interval around the segment center

    :param left_neighbor_score: score of the preceding segment, or None at the video start
    :param right_neighbor_score: score of the following segment, or None at the video end
    :return: list of (start_s, end_s) tuples inside seg
    :raise InvalidInput: if allotted_length is not in (0, duration(seg)]"""
    if not allotted_length > 0:
        raise InvalidInput("allotted length must be positive, got %r" % (allotted_length, ))
    if allotted_length > seg.duration + EPS_S:
        raise InvalidInput("allotted length %g exceeds the segment duration %g"
                           % (allotted_length, seg.duration))
    allotted_length = min(allotted_length, seg.duration)

    left_higher = left_neighbor_score is not None and left_neighbor_score > seg.score
    right_higher = right_neighbor_score is not None and right_neighbor_score > seg.score

    if left_higher and right_higher:
        half = allotted_length / 2.0
        return [(seg.start_s, seg.start_s + half), (seg.end_s - half, seg.end_s)]
    elif left_higher:
        return [(seg.start_s, seg.start_s + allotted_length)]
    elif right_higher:
        return [(seg.end_s - allotted_length, seg.end_s)]
    # END handle adjacent higher scores
    half = allotted_length / 2.0
    return [(seg.mid - half, seg.mid + half)]


def score_levels(segments):
    """:return: list of (score, [index, ...]) tuples, sorted by descending score,
        indices ascending within each level"""
    levels = dict()
    for index, seg in enumerate(segments):
        levels.setdefault(seg.score, list()).append(index)
    return sorted(levels.items(), key=lambda item: -item[0])


def extract_vm_summary(timeline, budget_ratio=BUDGET_RATIO):
    """Extract the visual-modal summary of a timeline.

    Segments of equal score form a level. Levels are consumed from the highest
    score downwards, a level fitting into the remaining budget is taken as a
    whole. The first level which does not fit receives the remaining budget,
    split among its segments proportionally to their duration and applied with
    scale_segment, after which selection stops.

    :param timeline: ClipTimeline
    :param budget_ratio: fraction of the video duration in (0, 1]
    :return: VMSummary
    :raise InvalidInput: if budget_ratio is out of range"""
    if not 0 < budget_ratio <= 1:
        raise InvalidInput("budget ratio must be in (0, 1], got %r" % (budget_ratio, ))

    segments = merge_clips(timeline)
    budget = budget_ratio * timeline.video_duration_s
    used = 0.0
    intervals = list()

    for score, indices in score_levels(segments):
        level_duration = math.fsum(segments[i].duration for i in indices)
        if used + level_duration <= budget + EPS_S:
            intervals.extend(segments[i].interval for i in indices)
            used += level_duration
            continue
        # END take whole level

        remaining = budget - used
        if remaining <= EPS_S:
            break
        for i in indices:
            seg = segments[i]
            left = segments[i - 1].score if i > 0 else None
            right = segments[i + 1].score if i + 1 < len(segments) else None
            allotted = remaining * seg.duration / level_duration
            intervals.extend(scale_segment(seg, left, right, allotted))
        # END for each segment at the scaled level
        break
    # END for each level

    return VMSummary(intervals, timeline.video_duration_s, budget_ratio)


def knapsack_summary(segments, budget_s, clip_duration_s=CLIP_DURATION_S, video_duration_s=None):
    """Select whole segments maximizing the sum of score times duration under a
    duration budget.

    Durations are discretized at clip granularity, rounding up, so the selected
    duration never exceeds the budget. Among equally valued selections the one
    preferring earlier segments wins.

    :param segments: disjoint Segment instances
    :param budget_s: budget in seconds, >= 0
    :param video_duration_s: duration of the video, defaults to the end of the last segment
    :return: VMSummary
    :raise InvalidInput: on a negative budget or if the video duration cannot be determined"""
    segments = list(segments)
    if budget_s < 0:
        raise InvalidInput("budget must not be negative, got %r" % (budget_s, ))
    if video_duration_s is None:
        if not segments:
            raise InvalidInput("video duration is required if there are no segments")
        video_duration_s = max(seg.end_s for seg in segments)
    # END assure video duration

    capacity = int(math.floor(budget_s / clip_duration_s + EPS_S))
    weights = [clip_count(seg.duration, clip_duration_s) for seg in segments]
    values = [seg.score * seg.duration for seg in segments]

    # best[i, c]: best value of items i.. with capacity c
    n = len(segments)
    best = np.zeros((n + 1, capacity + 1), dtype=np.float64)
    for i in range(n - 1, -1, -1):
        best[i] = best[i + 1]
        w = weights[i]
        if w <= capacity:
            best[i, w:] = np.maximum(best[i + 1, w:], best[i + 1, :capacity + 1 - w] + values[i])
        # END item fits at all
    # END for each item

    chosen = list()
    c = capacity
    for i in range(n):
        w = weights[i]
        if w <= c and values[i] > 0 and best[i + 1, c - w] + values[i] >= best[i + 1, c]:
            chosen.append(segments[i].interval)
            c -= w
        # END take item
    # END reconstruct selection

    ratio = min(1.0, budget_s / video_duration_s)
    return VMSummary(chosen, video_duration_s, ratio)


def clean_summary(summary, timeline, min_segment_s=MIN_SEGMENT_S, min_coverage=MIN_COVERAGE):
    """Apply the cleaning rules to a summary.

    Intervals shorter than min_segment_s are dropped. If nothing survives, or
    the surviving duration covers less than min_coverage of the video, the video
    is rejected.

    :return: cleaned VMSummary, or a Rejection carrying the reason code"""
    kept = [iv for iv in summary.intervals if iv[1] - iv[0] >= min_segment_s - EPS_S]
    if not kept:
        log.debug("rejecting summary: all %i intervals shorter than %gs",
                  len(summary.intervals), min_segment_s)
        return Rejection(str_reject_no_segments,
                         "all %i intervals are shorter than %gs" % (len(summary.intervals), min_segment_s))
    # END handle nothing left

    covered = total_duration(kept)
    floor = min_coverage * timeline.video_duration_s
    if covered < floor - EPS_S:
        log.debug("rejecting summary: %gs covered, %gs required", covered, floor)
        return Rejection(str_reject_low_coverage,
                         "summary covers %gs, at least %gs are required" % (covered, floor))
    # END handle coverage

    return VMSummary(kept, summary.video_duration_s, summary.budget_ratio)


def select_frames(timeline, budget_ratio=BUDGET_RATIO, fps=FPS):
    """:return: FrameSelection of the summary extracted from the given timeline"""
    return extract_vm_summary(timeline, budget_ratio).rasterize(fps)

#} END routines
