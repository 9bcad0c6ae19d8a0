# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Evaluation metrics for predicted saliency, text-to-clip similarity and frame selections.

The NDCG family ranks clips by a predicted score and weighs the ground-truth
gains of the top ranked clips, gains being ``2 ** g - 1`` of normalized scores.
Rank correlations and the frame level F-score complement it"""
import logging
import math

import numpy as np
from scipy import stats

from bidsum.base import ClipTimeline
from bidsum.const import (
    BUDGET_RATIO,
    CLIP_DURATION_S,
    FPS,
    TOP_RATIO
)
from bidsum.exc import InvalidInput
from bidsum.fun import (
    normalize_scores,
    rasterize
)
from bidsum.summary import select_frames
from bidsum.typ import metric_fields
from bidsum.util import LazyMixin

log = logging.getLogger(__name__)

__all__ = ('dcg_at_k', 'ndcg_at_k', 'top_k', 'ndcg_vm', 'ndcg_tm', 'ndcg_ms', 'kendall_tau',
           'spearman_rho', 'spearman_test', 'interval_fscore', 'NDCGScore', 'MetricReport',
           'evaluate_video', 'evaluate_corpus')


#{ Types

class NDCGScore(tuple):

    """NDCG of the top ranked share of clips and of all clips"""
    __slots__ = tuple()

    def __new__(cls, at_15, at_all):
        return tuple.__new__(cls, (float(at_15), float(at_all)))

    @property
    def at_15(self):
        return self[0]

    @property
    def at_all(self):
        return self[1]


class MetricReport(LazyMixin):

    """Per-video metric values and their corpus means.

    Per-video entries map field names of ``bidsum.typ.metric_fields`` to floats,
    fields which were not computed for a video are absent. Corpus means skip
    NaN values, a field which is NaN for every video averages to NaN."""
    __slots__ = ('_per_video', '_corpus', '_fields')

    def __init__(self, per_video):
        """:param per_video: mapping of video_id to a dict of field values"""
        self._per_video = dict((vid, dict(values)) for vid, values in sorted(per_video.items()))

    def _set_cache_(self, attr):
        if attr == '_fields':
            present = set()
            for values in self._per_video.values():
                present.update(values)
            self._fields = tuple(f for f in metric_fields if f in present)
        elif attr == '_corpus':
            corpus = dict()
            for field in self._fields:
                column = np.array([v[field] for v in self._per_video.values() if field in v], dtype=np.float64)
                finite = column[~np.isnan(column)]
                corpus[field] = float(finite.mean()) if finite.size else float('nan')
            # END for each field
            self._corpus = corpus
        else:
            super(MetricReport, self)._set_cache_(attr)
        # END handle attribute

    #{ Interface
    @property
    def per_video(self):
        return self._per_video

    @property
    def corpus(self):
        return self._corpus

    @property
    def fields(self):
        """:return: tuple of computed field names, in report order"""
        return self._fields

    def __len__(self):
        return len(self._per_video)
    #} END interface

#} END types


#{ NDCG

def dcg_at_k(gains_in_predicted_order, k):
    """:return: discounted cumulative gain of the first k gains, using exponential
        gains ``2 ** g - 1`` and logarithmic discounts
    :raise InvalidInput: if k is not in [1, len(gains)]"""
    gains = np.asarray(gains_in_predicted_order, dtype=np.float64)
    if not 1 <= k <= len(gains):
        raise InvalidInput("k must be in [1, %i], got %r" % (len(gains), k))
    discounts = np.log2(np.arange(2, k + 2, dtype=np.float64))
    return float(np.sum((np.exp2(gains[:k]) - 1.0) / discounts))


def top_k(n, ratio=TOP_RATIO):
    """:return: number of items forming the top ratio of n items, at least 1"""
    # rounding first keeps 0.15 * 20 at 3 instead of 3.0000000000000004
    return max(1, int(math.ceil(round(ratio * n, 9))))


def _check_pair(a, b, minlen=1):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or len(a) != len(b):
        raise InvalidInput("sequences must be one dimensional and of equal length, got %s and %s"
                           % (a.shape, b.shape))
    if len(a) < minlen:
        raise InvalidInput("sequences need at least %i elements" % minlen)
    return a, b


def ndcg_at_k(pred_scores, gt_scores, k):
    """Normalized DCG of the ranking induced by pred_scores.

    Clips are ranked by descending predicted score, ties keep ascending clip
    order. The gains of the ground truth in that order are divided by the ideal
    DCG. A ground truth without gains, thus an ideal DCG of 0, yields 1.0.

    :param gt_scores: ground truth scores normalized to [0, 1]
    :return: float in [0, 1]
    :raise InvalidInput: on length mismatch or k out of range"""
    pred, gt = _check_pair(pred_scores, gt_scores)
    order = np.argsort(-pred, kind='stable')
    ideal = dcg_at_k(np.sort(gt)[::-1], k)
    if ideal == 0:
        return 1.0
    return dcg_at_k(gt[order], k) / ideal


def _ndcg_pair(pred, gt, top_ratio):
    pred, gt = _check_pair(pred, gt)
    pred = normalize_scores(pred)
    gt = normalize_scores(gt)
    n = len(gt)
    return NDCGScore(ndcg_at_k(pred, gt, top_k(n, top_ratio)), ndcg_at_k(pred, gt, n))


def ndcg_vm(pred_saliency, gt_saliency, top_ratio=TOP_RATIO):
    """NDCG of predicted against ground truth saliency, both are normalized first

    :return: NDCGScore"""
    return _ndcg_pair(pred_saliency, gt_saliency, top_ratio)


def ndcg_tm(similarity_sequence, gt_saliency, top_ratio=TOP_RATIO):
    """NDCG of per-clip similarities between the textual summary and the video,
    ranked against ground truth saliency. Similarities must be pooled to clips
    by the caller, no resampling takes place

    :return: NDCGScore"""
    return _ndcg_pair(similarity_sequence, gt_saliency, top_ratio)


def ndcg_ms(vm, tm):
    """:return: NDCGScore averaging the visual and the textual NDCG"""
    return NDCGScore((vm.at_15 + tm.at_15) / 2.0, (vm.at_all + tm.at_all) / 2.0)

#} END NDCG


#{ Correlation

def _constant(x):
    return np.ptp(x) == 0


def kendall_tau(a, b):
    """:return: Kendall's tau-b of the two sequences, NaN if either one is constant
    :raise InvalidInput: if the sequences differ in length or have less than 2 elements"""
    a, b = _check_pair(a, b, minlen=2)
    if _constant(a) or _constant(b):
        return float('nan')
    tau = stats.kendalltau(a, b)[0]
    return float(min(1.0, max(-1.0, tau)))


def spearman_test(a, b):
    """Rank correlation of both sequences along with its significance

    :return: tuple(rho, pvalue). rho is the Pearson correlation of the average ranks,
        pvalue the two-sided p-value of the t-approximation with n - 2 degrees of
        freedom. Both are NaN if either sequence is constant, pvalue is NaN below 3 items
    :raise InvalidInput: if the sequences differ in length or have less than 2 elements"""
    a, b = _check_pair(a, b, minlen=2)
    if _constant(a) or _constant(b):
        return float('nan'), float('nan')
    with np.errstate(divide='ignore', invalid='ignore'):
        rho, pvalue = stats.spearmanr(a, b)[:2]
    # END ignore zero degrees of freedom
    if len(a) < 3:
        pvalue = float('nan')
    return float(min(1.0, max(-1.0, rho))), float(pvalue)


def spearman_rho(a, b):
    """:return: Spearman's rho of both sequences, NaN if either one is constant
    :raise InvalidInput: if the sequences differ in length or have less than 2 elements"""
    return spearman_test(a, b)[0]

#} END correlation



#{ Selections

def interval_fscore(pred, gt):
    """:return: harmonic mean of frame level precision and recall of pred against
        gt, 0.0 if either selection is empty
    :raise InvalidInput: if the selections differ in length"""
    if pred.length != gt.length:
        raise InvalidInput("frame selections differ in length: %i != %i" % (pred.length, gt.length))
    p = pred.as_array().astype(bool)
    g = gt.as_array().astype(bool)
    npred = np.count_nonzero(p)
    ngt = np.count_nonzero(g)
    if npred == 0 or ngt == 0:
        return 0.0
    overlap = np.count_nonzero(p & g)
    if overlap == 0:
        return 0.0
    precision = overlap / npred
    recall = overlap / ngt
    return 2.0 * precision * recall / (precision + recall)

#} END selections


#{ Evaluation

def _as_timeline(scores, clip_duration_s):
    if isinstance(scores, ClipTimeline):
        return scores
    return ClipTimeline.from_scores(scores, clip_duration_s)


def evaluate_video(pred_scores, gt, similarity=None, gt_intervals=None, top_ratio=TOP_RATIO,
                   budget_ratio=BUDGET_RATIO, fps=FPS, clip_duration_s=CLIP_DURATION_S):
    """Compute all metrics of a single video.

    The predicted frame selection is extracted from the predicted saliency with
    the same extractor that produced the ground truth summaries.

    :param pred_scores: predicted per-clip saliency
    :param gt: ground truth ClipTimeline, or a sequence of per-clip scores
    :param similarity: optional per-clip text-to-clip similarity, enables the
        textual and the bimodal NDCG fields
    :param gt_intervals: ground truth summary intervals. If None, they are
        extracted from gt
    :return: dict mapping metric field names to floats"""
    gt = _as_timeline(gt, clip_duration_s)
    pred = np.asarray(pred_scores, dtype=np.float64)
    if len(pred) != gt.num_clips:
        raise InvalidInput("prediction has %i clips, ground truth %i" % (len(pred), gt.num_clips))
    gt_scores = gt.as_array()

    values = dict()
    vm = ndcg_vm(pred, gt_scores, top_ratio)
    values['ndcg_vm@15'], values['ndcg_vm@all'] = vm
    if similarity is not None:
        tm = ndcg_tm(similarity, gt_scores, top_ratio)
        ms = ndcg_ms(vm, tm)
        values['ndcg_tm@15'], values['ndcg_tm@all'] = tm
        values['ndcg_ms@15'], values['ndcg_ms@all'] = ms
    # END handle textual branch

    if len(pred) >= 2:
        values['kendall_tau'] = kendall_tau(pred, gt_scores)
        values['spearman_rho'] = spearman_rho(pred, gt_scores)
    else:
        values['kendall_tau'] = values['spearman_rho'] = float('nan')
    # END handle single clip videos

    pred_timeline = ClipTimeline(pred, gt.video_duration_s, gt.clip_duration_s)
    pred_frames = select_frames(pred_timeline, budget_ratio, fps)
    if gt_intervals is None:
        gt_frames = select_frames(gt, budget_ratio, fps)
    else:
        gt_frames = rasterize(gt_intervals, fps, gt.video_duration_s)
    values['f_score'] = interval_fscore(pred_frames, gt_frames)
    return values


def evaluate_corpus(predictions, ground_truth, similarities=None, gt_intervals=None, **kwargs):
    """Evaluate predictions of a corpus of videos

    :param predictions: mapping of video_id to predicted per-clip saliency
    :param ground_truth: mapping of video_id to ClipTimeline or per-clip scores
    :param similarities: optional mapping of video_id to per-clip similarities
    :param gt_intervals: optional mapping of video_id to ground truth summary intervals
    :param kwargs: passed to evaluate_video
    :return: MetricReport
    :raise InvalidInput: if the keys of the mappings differ, naming the missing ids"""
    expected = set(ground_truth)
    maps = [('predictions', predictions)]
    if similarities is not None:
        maps.append(('similarities', similarities))
    for name, mapping in maps:
        missing = sorted(expected - set(mapping))
        extra = sorted(set(mapping) - expected)
        if missing or extra:
            parts = list()
            if missing:
                parts.append("missing in %s: %s" % (name, ', '.join(missing)))
            if extra:
                parts.append("unknown to ground truth: %s" % ', '.join(extra))
            raise InvalidInput('; '.join(parts))
        # END handle mismatch
    # END for each mapping

    per_video = dict()
    for video_id in sorted(expected):
        per_video[video_id] = evaluate_video(
            predictions[video_id], ground_truth[video_id],
            similarity=similarities[video_id] if similarities is not None else None,
            gt_intervals=gt_intervals.get(video_id) if gt_intervals is not None else None,
            **kwargs)
    # END for each video
    log.info("evaluated %i videos", len(per_video))
    return MetricReport(per_video)

#} END evaluation
