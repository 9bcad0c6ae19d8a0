# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Construction of (video, textual summary, visual summary) triplets from
highlight annotations.

Each annotation names a source video, a query sentence, the windows of the
source relevant to the query and per-clip saliency scores of several
annotators. The relevant windows are concatenated into a new video whose
saliency timeline drives the summary extraction. The query becomes the
textual summary."""
import json
import logging
import math
import os

import numpy as np
from scipy import stats as scipy_stats

from bidsum.base import (
    ClipTimeline,
    Rejection,
    VMSummary
)
from bidsum.const import (
    BUDGET_RATIO,
    CLIP_DURATION_S,
    EPS_S,
    FPS,
    MIN_COVERAGE,
    MIN_SEGMENT_S,
    SPLIT_FRACTIONS
)
from bidsum.exc import (
    InvalidInput,
    ParseError,
    SchemaError
)
from bidsum.fun import (
    clip_count,
    merge_clips
)
from bidsum.metrics import (
    spearman_test
)
from bidsum.report import (
    csv_text,
    dumps_json,
    dumps_jsonl,
    iter_jsonl
)
from bidsum.summary import (
    clean_summary,
    extract_vm_summary,
    knapsack_summary
)
from bidsum.typ import (
    split_names,
    str_reject_duplicate
)
from bidsum.util import (
    join,
    stable_fraction,
    write_atomic
)

log = logging.getLogger(__name__)

__all__ = ('AnnotationRecord', 'BidsTriplet', 'RejectedVideo', 'DatasetStats', 'PreservationReport',
           'parse_record', 'ingest', 'coalesce_windows', 'merge_windows', 'source_time', 'assign_split',
           'build_dataset', 'compute_stats', 'validate_saliency_preservation', 'compare_to_knapsack',
           'triplet_as_dict', 'triplet_from_dict', 'write_dataset', 'read_triplets', 'read_score_file')

#{ Configuration
MIN_ANNOTATION_SCORE = 0
MAX_ANNOTATION_SCORE = 4
# proportion bins in percent of the video duration
PROPORTION_EDGES = tuple(float(e) for e in range(5, 16))
# position bins as fraction of the video duration
POSITION_EDGES = tuple(round(i * 0.05, 10) for i in range(21))
SIGNIFICANCE_LEVEL = 0.05
#} END configuration


#{ Types

class AnnotationRecord(tuple):

    """One annotated query of a source video.

    clip_scores holds one tuple of annotator scores per clip covered by the
    coalesced relevant windows, in time order."""
    __slots__ = tuple()

    def __new__(cls, qid, query, vid, source_duration_s, relevant_windows, clip_scores,
                clip_duration_s=CLIP_DURATION_S):
        return tuple.__new__(cls, (qid, query, vid, float(source_duration_s),
                                   tuple((float(s), float(e)) for s, e in relevant_windows),
                                   tuple(tuple(int(v) for v in row) for row in clip_scores),
                                   float(clip_duration_s)))

    #{ Interface
    @property
    def qid(self):
        return self[0]

    @property
    def query(self):
        return self[1]

    @property
    def vid(self):
        return self[2]

    @property
    def source_duration_s(self):
        return self[3]

    @property
    def relevant_windows(self):
        return self[4]

    @property
    def clip_scores(self):
        return self[5]

    @property
    def clip_duration_s(self):
        return self[6]

    @property
    def video_id(self):
        return "%s_%s" % (self[2], self[0])

    def clip_saliency(self):
        """:return: tuple of mean annotator scores per clip"""
        return tuple(math.fsum(row) / len(row) for row in self[5])
    #} END interface


class BidsTriplet(tuple):

    """A constructed video with its textual and visual summaries.

    Provenance is a tuple(vid, qid, window_map) relating the constructed video
    to its source, see merge_windows"""
    __slots__ = tuple()

    def __new__(cls, video_id, tm_summary, timeline, vm_summary, split, provenance):
        if split not in split_names:
            raise InvalidInput("unknown split %r" % (split, ))
        return tuple.__new__(cls, (video_id, tm_summary, timeline, vm_summary, split, tuple(provenance)))

    @property
    def video_id(self):
        return self[0]

    @property
    def tm_summary(self):
        return self[1]

    @property
    def timeline(self):
        return self[2]

    @property
    def vm_summary(self):
        return self[3]

    @property
    def split(self):
        return self[4]

    @property
    def provenance(self):
        return self[5]

    @property
    def vid(self):
        return self[5][0]


class RejectedVideo(tuple):

    """Entry of the rejection log"""
    __slots__ = tuple()

    def __new__(cls, video_id, qid, vid, rejection):
        return tuple.__new__(cls, (video_id, qid, vid, rejection))

    @property
    def video_id(self):
        return self[0]

    @property
    def qid(self):
        return self[1]

    @property
    def vid(self):
        return self[2]

    @property
    def reason(self):
        return self[3].reason

    @property
    def detail(self):
        return self[3].detail

    def as_dict(self):
        return {'video_id': self[0], 'qid': self[1], 'vid': self[2], 'reason': self.reason, 'detail': self.detail}


class DatasetStats(tuple):

    """Aggregates per split and overall along with the summary histograms.

    Groups map a split name, or 'all', to a dict of aggregates. Histograms are
    tuples of (bin_start, bin_end, count)"""
    __slots__ = tuple()

    # aggregate names, in report order
    columns = ('video_count', 'avg_video_length_s', 'total_length_h', 'avg_vm_length_s',
               'avg_vm_proportion_pct', 'avg_tm_words')
    group_names = split_names + ('all', )

    def __new__(cls, groups, proportion_hist, position_hist):
        return tuple.__new__(cls, (groups, tuple(proportion_hist), tuple(position_hist)))

    @property
    def groups(self):
        return self[0]

    @property
    def proportion_hist(self):
        return self[1]

    @property
    def position_hist(self):
        return self[2]

    def as_dict(self):
        return {
            'groups': self[0],
            'proportion_hist': [list(b) for b in self[1]],
            'position_hist': [list(b) for b in self[2]],
        }

    @classmethod
    def from_dict(cls, doc):
        """:raise KeyError: if a required key is missing"""
        return cls(doc['groups'], [tuple(b) for b in doc['proportion_hist']],
                   [tuple(b) for b in doc['position_hist']])


class PreservationReport(tuple):

    """Rank correlation between frame level saliency and frame selection.

    per_video holds tuple(video_id, rho, p_value) of every evaluated video.
    Videos with constant saliency or a constant selection are not evaluated,
    their ids are listed in excluded"""
    __slots__ = tuple()

    def __new__(cls, per_video, excluded):
        return tuple.__new__(cls, (tuple(per_video), tuple(excluded)))

    @property
    def per_video(self):
        return self[0]

    @property
    def excluded(self):
        return self[1]

    @property
    def rhos(self):
        return np.array([r for _, r, _ in self[0]], dtype=np.float64)

    @property
    def mean_rho(self):
        return float(self.rhos.mean()) if self[0] else float('nan')

    @property
    def significant_fraction(self):
        """:return: fraction of evaluated videos whose correlation is significant"""
        if not self[0]:
            return float('nan')
        return sum(1 for _, _, p in self[0] if p < SIGNIFICANCE_LEVEL) / float(len(self[0]))

    @property
    def mean_pvalue(self):
        """:return: p-value of a one-sample t-test of the per-video correlations against 0"""
        rhos = self.rhos
        if len(rhos) < 2 or np.all(rhos == rhos[0]):
            return float('nan')
        return float(scipy_stats.ttest_1samp(rhos, 0.0).pvalue)

    @property
    def significant(self):
        return bool(self.mean_pvalue < SIGNIFICANCE_LEVEL and self.mean_rho > 0)

    def as_dict(self):
        return {
            'per_video': [{'video_id': v, 'rho': r, 'p_value': p} for v, r, p in self[0]],
            'excluded': list(self[1]),
            'mean_rho': self.mean_rho,
            'mean_p_value': self.mean_pvalue,
            'significant': self.significant,
            'significant_fraction': self.significant_fraction,
        }

#} END types


#{ Ingestion

def _number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _on_grid(value, clip_duration_s):
    q = value / clip_duration_s
    return abs(q - round(q)) <= EPS_S * max(1.0, abs(q))


def coalesce_windows(windows):
    """:return: tuple of sorted windows with overlapping or touching windows merged"""
    merged = list()
    for start, end in sorted(windows):
        if merged and start <= merged[-1][1] + EPS_S:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    # END for each window
    return tuple(merged)


def _covered_clips(windows, clip_duration_s):
    count = 0
    for start, end in windows:
        count += clip_count(end - start, clip_duration_s)
    return count


def parse_record(obj, path=None, line=None, clip_duration_s=CLIP_DURATION_S):
    """Validate a decoded annotation object and convert it into a record

    :return: AnnotationRecord
    :raise SchemaError: naming the offending field"""
    qid = obj.get('qid') if isinstance(obj, dict) else None

    def fail(message, field):
        raise SchemaError(message, path, line, field=field, qid=qid)

    if not isinstance(obj, dict):
        fail("expected a JSON object", None)
    for key in ('qid', 'query', 'vid', 'duration', 'relevant_windows', 'saliency_scores'):
        if key not in obj:
            fail("missing key", key)
    # END for each required key
    if not isinstance(qid, int) or isinstance(qid, bool):
        fail("expected an integer", 'qid')
    if not isinstance(obj['query'], str):
        fail("expected a string", 'query')
    if not isinstance(obj['vid'], str) or not obj['vid']:
        fail("expected a non-empty string", 'vid')
    duration = obj['duration']
    if not _number(duration) or duration <= 0:
        fail("expected a positive number", 'duration')

    windows = obj['relevant_windows']
    if not isinstance(windows, list) or not windows:
        fail("expected a non-empty array of windows", 'relevant_windows')
    for i, window in enumerate(windows):
        field = "relevant_windows[%i]" % i
        if not isinstance(window, list) or len(window) != 2:
            fail("expected a [start, end] pair", field)
        start, end = window
        if not _number(start) or start < 0:
            fail("expected a non-negative number", field + "[0]")
        if not _number(end) or end <= start:
            fail("expected a number larger than the start", field + "[1]")
        if end > duration + EPS_S:
            fail("window end %g exceeds the video duration %g" % (end, duration), field + "[1]")
        if not _on_grid(start, clip_duration_s):
            fail("window start %g is not aligned to %gs clips" % (start, clip_duration_s), field + "[0]")
        if not (_on_grid(end, clip_duration_s) or abs(end - duration) <= EPS_S):
            fail("window end %g is not aligned to %gs clips" % (end, clip_duration_s), field + "[1]")
    # END for each window

    scores = obj['saliency_scores']
    if not isinstance(scores, list):
        fail("expected an array of per-clip score arrays", 'saliency_scores')
    expected = _covered_clips(coalesce_windows((float(s), float(e)) for s, e in windows), clip_duration_s)
    if len(scores) != expected:
        fail("expected %i clip score arrays for the relevant windows, got %i" % (expected, len(scores)),
             'saliency_scores')
    for i, row in enumerate(scores):
        field = "saliency_scores[%i]" % i
        if not isinstance(row, list) or not row:
            fail("expected a non-empty array of annotator scores", field)
        for j, value in enumerate(row):
            if (not isinstance(value, int) or isinstance(value, bool)
                    or not MIN_ANNOTATION_SCORE <= value <= MAX_ANNOTATION_SCORE):
                fail("expected an integer in [%i, %i]" % (MIN_ANNOTATION_SCORE, MAX_ANNOTATION_SCORE),
                     "%s[%i]" % (field, j))
        # END for each annotator
    # END for each clip

    return AnnotationRecord(qid, obj['query'], obj['vid'], duration, windows, scores, clip_duration_s)


def ingest(filepath, clip_duration_s=CLIP_DURATION_S):
    """Read annotation records from a file of one JSON object per line. Keys
    not belonging to the schema are ignored.

    :return: list of AnnotationRecord, in file order
    :raise OSError: if the file cannot be read
    :raise ParseError: on malformed JSON, naming the line
    :raise SchemaError: on schema violations, naming line, field and qid"""
    records = list()
    for lineno, obj in iter_jsonl(filepath):
        records.append(parse_record(obj, filepath, lineno, clip_duration_s))
    log.info("ingested %i records from %s", len(records), filepath)
    return records

#} END ingestion


#{ Construction

def merge_windows(record):
    """Concatenate the coalesced relevant windows of a record into one video

    :return: tuple(ClipTimeline, window_map). The window map holds one tuple
        (merged_start, merged_end, source_start, source_end) per coalesced window"""
    window_map = list()
    offset = 0.0
    for start, end in coalesce_windows(record.relevant_windows):
        window_map.append((offset, offset + (end - start), start, end))
        offset += end - start
    # END for each window
    timeline = ClipTimeline(record.clip_saliency(), offset, record.clip_duration_s)
    return timeline, tuple(window_map)


def source_time(window_map, merged_s):
    """:return: the source time corresponding to the given time of the merged video
    :raise InvalidInput: if the time lies outside the merged video"""
    for mstart, mend, sstart, _ in window_map:
        if mstart - EPS_S <= merged_s < mend:
            return sstart + (merged_s - mstart)
    # END for each window
    raise InvalidInput("time %g lies outside of the merged video" % merged_s)


def assign_split(vid, fractions=SPLIT_FRACTIONS, seed=0):
    """:return: name of the split the source video belongs to. The assignment only
        depends on vid, fractions and seed
    :raise InvalidInput: if fractions are not three non-negative values summing to 1"""
    if len(fractions) != len(split_names) or any(f < 0 for f in fractions) or abs(sum(fractions) - 1) > 1e-9:
        raise InvalidInput("split fractions must be three non-negative values summing to 1, got %r"
                           % (tuple(fractions), ))
    value = stable_fraction(vid, seed)
    cumulative = 0.0
    for name, fraction in zip(split_names, fractions):
        cumulative += fraction
        if value < cumulative:
            return name
    # END for each split
    return split_names[-1]


def build_dataset(records, budget_ratio=BUDGET_RATIO, split_fractions=SPLIT_FRACTIONS, seed=0,
                  min_segment_s=MIN_SEGMENT_S, min_coverage=MIN_COVERAGE):
    """Turn annotation records into triplets.

    Every record is merged, summarized and cleaned. Records repeating the
    source video and windows of an earlier record are rejected as duplicates.

    :return: tuple(triplets, rejections) as lists of BidsTriplet and RejectedVideo,
        both in record order"""
    triplets = list()
    rejections = list()
    seen = dict()
    for record in records:
        key = (record.vid, coalesce_windows(record.relevant_windows))
        if key in seen:
            rejection = Rejection(str_reject_duplicate, "same source windows as %s" % seen[key])
            rejections.append(RejectedVideo(record.video_id, record.qid, record.vid, rejection))
            continue
        seen[key] = record.video_id

        timeline, window_map = merge_windows(record)
        summary = clean_summary(extract_vm_summary(timeline, budget_ratio), timeline, min_segment_s, min_coverage)
        if isinstance(summary, Rejection):
            rejections.append(RejectedVideo(record.video_id, record.qid, record.vid, summary))
            log.debug("rejected %s: %s", record.video_id, summary.detail)
            continue
        # END handle rejection

        split = assign_split(record.vid, split_fractions, seed)
        triplets.append(BidsTriplet(record.video_id, record.query, timeline, summary, split,
                                    (record.vid, record.qid, window_map)))
    # END for each record
    log.info("built %i triplets, rejected %i videos", len(triplets), len(rejections))
    return triplets, rejections


def _histogram(values, edges):
    counts, _ = np.histogram(np.clip(values, edges[0], edges[-1]), bins=np.asarray(edges))
    return tuple((edges[i], edges[i + 1], int(c)) for i, c in enumerate(counts))


def _group_stats(triplets):
    n = len(triplets)
    if not n:
        nan = float('nan')
        return dict((('video_count', 0), ('avg_video_length_s', nan), ('total_length_h', 0.0),
                     ('avg_vm_length_s', nan), ('avg_vm_proportion_pct', nan), ('avg_tm_words', nan)))
    lengths = [t.timeline.video_duration_s for t in triplets]
    vm = [t.vm_summary.total_duration for t in triplets]
    return {
        'video_count': n,
        'avg_video_length_s': math.fsum(lengths) / n,
        'total_length_h': math.fsum(lengths) / 3600.0,
        'avg_vm_length_s': math.fsum(vm) / n,
        'avg_vm_proportion_pct': math.fsum(100.0 * v / l for v, l in zip(vm, lengths)) / n,
        'avg_tm_words': math.fsum(len(t.tm_summary.split()) for t in triplets) / float(n),
    }


def compute_stats(triplets):
    """:return: DatasetStats of the given triplets
    :raise InvalidInput: if there are no triplets"""
    triplets = list(triplets)
    if not triplets:
        raise InvalidInput("cannot compute statistics of an empty dataset")
    groups = dict()
    for name in split_names:
        groups[name] = _group_stats([t for t in triplets if t.split == name])
    groups['all'] = _group_stats(triplets)

    proportions = [100.0 * t.vm_summary.coverage for t in triplets]
    positions = [(s + e) / 2.0 / t.timeline.video_duration_s for t in triplets for s, e in t.vm_summary.intervals]
    return DatasetStats(groups, _histogram(proportions, PROPORTION_EDGES), _histogram(positions, POSITION_EDGES))


def _preservation(entries, fps, empty_as_zero=False):
    per_video = list()
    excluded = list()
    for video_id, timeline, summary in entries:
        saliency = timeline.frame_scores(fps)
        frames = summary.rasterize(fps).as_array()
        if np.all(saliency == saliency[0]):
            excluded.append(video_id)
            continue
        if np.all(frames == frames[0]):
            if empty_as_zero and not frames[0]:
                per_video.append((video_id, 0.0, 1.0))
            else:
                excluded.append(video_id)
            continue
        # END handle constant sequences
        rho, pvalue = spearman_test(saliency, frames)
        per_video.append((video_id, rho, pvalue))
    # END for each entry
    if excluded:
        log.warning("%i videos with constant saliency or selection excluded from the correlation", len(excluded))
    return PreservationReport(per_video, excluded)


def validate_saliency_preservation(triplets, fps=FPS):
    """Measure how well the visual summaries preserve the saliency of their videos

    :return: PreservationReport of the Spearman correlation between the frame
        level saliency and the frame selection of each triplet
    :raise InvalidInput: if there are no triplets"""
    triplets = list(triplets)
    if not triplets:
        raise InvalidInput("cannot validate an empty dataset")
    return _preservation(((t.video_id, t.timeline, t.vm_summary) for t in triplets), fps)


def compare_to_knapsack(timelines, budget_ratio=BUDGET_RATIO, fps=FPS):
    """Compare saliency preservation of the extractor with whole segment knapsack
    selection at equal budgets. A knapsack choosing nothing preserves nothing and
    counts as a correlation of 0.

    :param timelines: mapping of video_id to ClipTimeline
    :return: tuple(extraction_report, knapsack_report) of PreservationReport"""
    extracted = list()
    knapsack = list()
    for video_id, timeline in sorted(timelines.items()):
        extracted.append((video_id, timeline, extract_vm_summary(timeline, budget_ratio)))
        knapsack.append((video_id, timeline, knapsack_summary(
            merge_clips(timeline), budget_ratio * timeline.video_duration_s,
            timeline.clip_duration_s, timeline.video_duration_s)))
    # END for each timeline
    return _preservation(extracted, fps, empty_as_zero=True), _preservation(knapsack, fps, empty_as_zero=True)

#} END construction


#{ Serialization

def triplet_as_dict(triplet):
    vid, qid, window_map = triplet.provenance
    return {
        'video_id': triplet.video_id,
        'tm_summary': triplet.tm_summary,
        'clip_duration_s': triplet.timeline.clip_duration_s,
        'duration_s': triplet.timeline.video_duration_s,
        'saliency': list(triplet.timeline.scores),
        'vm_intervals': [list(iv) for iv in triplet.vm_summary.intervals],
        'budget_ratio': triplet.vm_summary.budget_ratio,
        'split': triplet.split,
        'provenance': {'vid': vid, 'qid': qid, 'windows': [list(w) for w in window_map]},
    }


def triplet_from_dict(doc, path=None, line=None):
    """:return: BidsTriplet of a document produced by triplet_as_dict
    :raise SchemaError: on missing keys or invalid values"""
    try:
        timeline = ClipTimeline(doc['saliency'], doc['duration_s'], doc['clip_duration_s'])
        summary = VMSummary(doc['vm_intervals'], timeline.video_duration_s, doc.get('budget_ratio', BUDGET_RATIO))
        prov = doc['provenance']
        provenance = (prov['vid'], prov['qid'], tuple(tuple(w) for w in prov['windows']))
        return BidsTriplet(doc['video_id'], doc['tm_summary'], timeline, summary, doc['split'], provenance)
    except KeyError as e:
        raise SchemaError("missing key", path, line, field=e.args[0]) from e
    except (TypeError, ValueError) as e:
        raise SchemaError("invalid triplet: %s" % e, path, line) from e


def write_dataset(out_dir, triplets, rejections, stats):
    """Write triplets, rejection log, statistics and histograms into out_dir,
    which is created if needed

    :return: list of written file paths"""
    os.makedirs(out_dir, exist_ok=True)
    hist_header = ('bin_start', 'bin_end', 'count')
    stats_rows = [[name] + [stats.groups[name][c] for c in DatasetStats.columns] for name in DatasetStats.group_names]
    outputs = (
        ('triplets.jsonl', dumps_jsonl(triplet_as_dict(t) for t in triplets)),
        ('rejections.jsonl', dumps_jsonl(r.as_dict() for r in rejections)),
        ('stats.json', dumps_json(stats.as_dict())),
        ('stats.csv', csv_text(('split', ) + DatasetStats.columns, stats_rows)),
        ('proportion_hist.csv', csv_text(hist_header, stats.proportion_hist)),
        ('position_hist.csv', csv_text(hist_header, stats.position_hist)),
    )
    written = list()
    for name, text in outputs:
        path = join(out_dir, name)
        write_atomic(path, text)
        written.append(path)
    # END for each output
    log.info("wrote %i triplets and %i rejections to %s", len(triplets), len(rejections), out_dir)
    return written


def read_triplets(filepath):
    """:return: list of BidsTriplet read from a triplets file
    :raise ParseError: on malformed lines"""
    return [triplet_from_dict(doc, filepath, lineno) for lineno, doc in iter_jsonl(filepath)]


def _score_entry(entry, index, clip_duration_s, path, line):
    if isinstance(entry, list):
        video_id, scores, duration, clip = str(index), entry, None, clip_duration_s
    elif isinstance(entry, dict):
        for key in ('video_id', 'scores'):
            if key not in entry:
                raise SchemaError("missing key", path, line, field=key)
        video_id = str(entry['video_id'])
        scores = entry['scores']
        duration = entry.get('duration_s')
        clip = entry.get('clip_duration_s', clip_duration_s)
    else:
        raise SchemaError("expected an array of scores or an object", path, line)
    # END handle entry kind
    if not isinstance(scores, list) or not scores:
        raise SchemaError("expected a non-empty array of scores", path, line, field='scores')
    if not all(_number(s) for s in scores):
        raise SchemaError("scores must be finite numbers", path, line, field='scores')
    try:
        if duration is None:
            return video_id, ClipTimeline.from_scores(scores, clip)
        return video_id, ClipTimeline(scores, duration, clip)
    except InvalidInput as e:
        raise SchemaError(str(e), path, line, field='scores') from e


def read_score_file(filepath, clip_duration_s=CLIP_DURATION_S):
    """Read per-clip scores of one or more videos.

    The file is either a single JSON document - an array of numbers, or an
    array of entries - or holds one entry per line. An entry is an array of
    numbers, whose video id is its index, or an object with ``video_id``,
    ``scores`` and optionally ``duration_s`` and ``clip_duration_s``.

    :return: list of tuple(video_id, ClipTimeline) in file order
    :raise ParseError: on malformed content
    :raise SchemaError: on empty score arrays and invalid entries"""
    with open(filepath, 'r', encoding='utf-8') as fp:
        text = fp.read()
    if not text.strip():
        raise SchemaError("no scores found", filepath, 1)
    try:
        doc = json.loads(text)
    except ValueError as e:
        first = next(line for line in text.splitlines() if line.strip())
        try:
            json.loads(first)
        except ValueError:
            # a single document spanning lines, report where it breaks
            raise ParseError("malformed JSON: %s" % getattr(e, 'msg', e), filepath,
                             getattr(e, 'lineno', None)) from e
        entries = [(lineno, obj) for lineno, obj in iter_jsonl(filepath)]
    else:
        if isinstance(doc, list) and (not doc or not isinstance(doc[0], (list, dict))):
            entries = [(1, doc)]
        elif isinstance(doc, list):
            entries = [(None, e) for e in doc]
        else:
            entries = [(1, doc)]
    # END handle document layout

    timelines = list()
    seen = set()
    for index, (line, entry) in enumerate(entries):
        video_id, timeline = _score_entry(entry, index, clip_duration_s, filepath, line)
        if video_id in seen:
            raise SchemaError("duplicate video id %r" % video_id, filepath, line, field='video_id')
        seen.add(video_id)
        timelines.append((video_id, timeline))
    # END for each entry
    return timelines

#} END serialization
