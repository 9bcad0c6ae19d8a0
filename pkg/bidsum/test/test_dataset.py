# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Test for the triplet construction pipeline"""
import json
import os
from itertools import combinations

import numpy as np

from bidsum.base import (
    ClipTimeline,
    VMSummary
)
from bidsum.dataset import (
    AnnotationRecord,
    assign_split,
    BidsTriplet,
    build_dataset,
    coalesce_windows,
    compare_to_knapsack,
    compute_stats,
    DatasetStats,
    ingest,
    merge_windows,
    parse_record,
    read_score_file,
    read_triplets,
    source_time,
    validate_saliency_preservation,
    write_dataset
)
from bidsum.exc import (
    InvalidInput,
    ParseError,
    SchemaError
)
from bidsum.metrics import spearman_rho
from bidsum.summary import clean_summary
from bidsum.test.lib import (
    fixture_path,
    make_timeline,
    read_bytes,
    TestBase,
    with_rw_directory,
    write_text
)


def make_record(**kwargs):
    obj = {'qid': 1, 'query': 'a dog runs', 'vid': 'v', 'duration': 20,
           'relevant_windows': [[0, 10]], 'saliency_scores': [[1, 2]] * 5}
    obj.update(kwargs)
    return obj


class TestIngest(TestBase):

    def test_fixture(self):
        records = ingest(fixture_path('annotations.jsonl'))
        assert len(records) == 10
        rec = records[0]
        assert rec.qid == 1 and rec.vid == 'vidA' and rec.video_id == 'vidA_1'
        assert rec.relevant_windows == ((10.0, 30.0), (50.0, 70.0))
        assert len(rec.clip_scores) == 20 and rec.clip_scores[6] == (4, 4, 4)
        assert rec.clip_saliency()[6] == 4.0
        assert records[1].clip_saliency()[0] == 0.5

    @with_rw_directory
    def test_empty_file(self, path):
        assert ingest(write_text(os.path.join(path, 'a.jsonl'), '')) == []

    def test_schema_errors(self):
        cases = (
            (make_record(relevant_windows=[[0, 22]], saliency_scores=[[1]] * 11), 'relevant_windows[0][1]'),
            (make_record(relevant_windows=[[1, 10]]), 'relevant_windows[0][0]'),
            (make_record(relevant_windows=[[0, 10], [8, 4]]), 'relevant_windows[1][1]'),
            (make_record(saliency_scores=[[1]] * 4), 'saliency_scores'),
            (make_record(saliency_scores=[[1]] * 4 + [[5]]), 'saliency_scores[4][0]'),
            (make_record(saliency_scores=[[1]] * 4 + [[]]), 'saliency_scores[4]'),
            (make_record(qid='1'), 'qid'),
            (make_record(duration=-1), 'duration'),
        )
        for obj, field in cases:
            try:
                parse_record(obj, 'annotations.jsonl', 7)
            except SchemaError as e:
                assert e.field == field, (e.field, field)
                assert e.line == 7
                assert "qid" in str(e) or field == 'qid'
            else:
                self.fail("expected a schema error for %s" % field)
            # END handle error
        # END for each case

        obj = make_record()
        del obj['query']
        self.assertRaises(SchemaError, parse_record, obj)
        self.assertRaises(SchemaError, parse_record, [1, 2])

    @with_rw_directory
    def test_malformed_line(self, path):
        fpath = write_text(os.path.join(path, 'a.jsonl'), json.dumps(make_record()) + '\n{"qid": \n')
        try:
            ingest(fpath)
        except ParseError as e:
            assert e.line == 2
        else:
            self.fail("expected a parse error")
        # END handle error
        self.assertRaises(OSError, ingest, os.path.join(path, 'missing.jsonl'))


class TestMerge(TestBase):

    def test_single_window(self):
        tl, window_map = merge_windows(parse_record(make_record()))
        assert tl.video_duration_s == 10.0
        assert window_map == ((0.0, 10.0, 0.0, 10.0), )
        assert tl.scores == (1.5, ) * 5

    def test_concatenation(self):
        rec = parse_record(make_record(relevant_windows=[[12, 16], [4, 8]], saliency_scores=[[4, 4, 4]] * 4))
        tl, window_map = merge_windows(rec)
        assert tl.video_duration_s == 8.0 and tl.num_clips == 4
        assert tl.scores[0] == 4.0
        assert source_time(window_map, 4.0) == 12.0
        assert source_time(window_map, 3.0) == 7.0
        self.assertRaises(InvalidInput, source_time, window_map, 8.0)

    def test_window_map_bijection(self):
        rec = parse_record(make_record(duration=100, relevant_windows=[[20, 36], [30, 44], [60, 76]],
                                       saliency_scores=[[1]] * 20))
        tl, window_map = merge_windows(rec)
        sources = [source_time(window_map, tl.clip_bounds(i)[0]) for i in range(tl.num_clips)]
        assert len(set(sources)) == tl.num_clips
        assert sources[:12] == [20.0 + 2 * i for i in range(12)]
        assert sources[12:] == [60.0 + 2 * i for i in range(8)]

    def test_coalesce(self):
        assert coalesce_windows([(30, 44), (20, 36), (44, 50), (60, 62)]) == ((20, 50), (60, 62))


class TestBuild(TestBase):

    def setUp(self):
        super(TestBuild, self).setUp()
        self.records = ingest(fixture_path('annotations.jsonl'))

    def test_fixture_corpus(self):
        triplets, rejections = build_dataset(self.records)
        by_id = dict((t.video_id, t) for t in triplets)
        assert [t.video_id for t in triplets] == ['vidA_1', 'vidA_2', 'vidD_6', 'vidE_7', 'vidF_8', 'vidG_9',
                                                  'vidH_10']
        assert [(r.video_id, r.reason) for r in rejections] == [
            ('vidB_3', 'no_segments'), ('vidC_4', 'low_coverage'), ('vidA_5', 'duplicate')]

        expected = {
            'vidA_1': ((13.0, 19.0), ),
            'vidA_2': ((4.5, 7.5), ),
            'vidD_6': ((28.0, 34.0), ),
            'vidE_7': ((20.0, 26.0), ),
            'vidF_8': ((12.75, 17.25), ),
            'vidG_9': ((16.5, 19.5), ),
            'vidH_10': ((9.5, 12.5), ),
        }
        for video_id, intervals in expected.items():
            assert by_id[video_id].vm_summary.intervals == intervals, video_id
        # END for each triplet

        assert by_id['vidA_1'].split == by_id['vidA_2'].split
        assert by_id['vidE_7'].timeline.video_duration_s == 41.0
        assert by_id['vidE_7'].timeline.num_clips == 21
        assert by_id['vidA_1'].tm_summary == 'a man walks his dog along the beach'
        assert by_id['vidH_10'].provenance[2] == ((0.0, 10.0, 0.0, 10.0), (10.0, 20.0, 40.0, 50.0))

    def test_emitted_summaries_are_clean(self):
        triplets, _ = build_dataset(self.records)
        for t in triplets:
            assert clean_summary(t.vm_summary, t.timeline) == t.vm_summary
            assert t.vm_summary.total_duration <= 0.15 * t.timeline.video_duration_s + 1e-9
        # END for each triplet

    def test_no_split_leakage(self):
        split_corpora = 0
        for corpus in range(1000):
            records = list()
            for qid in range(12):
                num_clips = int(self.rng.integers(5, 16))
                start = 2.0 * int(self.rng.integers(0, 10))
                end = start + 2.0 * num_clips
                records.append(AnnotationRecord(
                    qid, "query %i" % qid, "c%i_v%i" % (corpus, int(self.rng.integers(0, 8))),
                    end + float(self.rng.integers(0, 20)), [(start, end)],
                    self.rng.integers(0, 5, size=(num_clips, 3))))
            # END for each record
            triplets, _ = build_dataset(records, seed=corpus)

            vids = dict()
            for t in triplets:
                vids.setdefault(t.split, set()).add(t.vid)
            # END for each triplet
            for a, b in combinations(vids.values(), 2):
                assert not a & b
            split_corpora += len(vids) > 1
        # END for each corpus
        assert split_corpora > 500

    def test_assign_split(self):
        assert assign_split('v', (0.5, 0.3, 0.2), 4) == assign_split('v', (0.5, 0.3, 0.2), 4)
        assert assign_split('v', (1.0, 0.0, 0.0)) == 'train'
        self.assertRaises(InvalidInput, assign_split, 'v', (0.5, 0.5))
        self.assertRaises(InvalidInput, assign_split, 'v', (0.5, 0.6, -0.1))

    def test_split_fractions(self):
        counts = dict()
        for i in range(2000):
            name = assign_split("vid%i" % i)
            counts[name] = counts.get(name, 0) + 1
        # END for each vid
        assert abs(counts['train'] / 2000.0 - 0.72) < 0.05
        assert abs(counts['test'] / 2000.0 - 0.20) < 0.05
        assert assign_split('any', (0, 0, 1)) == 'test'

    def test_cleaning_thresholds(self):
        _, rejections = build_dataset(self.records, min_segment_s=0.5)
        assert 'vidB_3' not in [r.video_id for r in rejections]
        triplets, _ = build_dataset(self.records, min_coverage=0.2)
        assert triplets == []


class TestStats(TestBase):

    def test_single_video(self):
        tl = ClipTimeline.from_scores([0] * 20)
        t = BidsTriplet('x', 'two words', tl, VMSummary([(10, 16)], 40.0), 'train', ('x', 1, ()))
        stats = compute_stats([t])
        assert stats.groups['all']['avg_vm_proportion_pct'] == 15.0
        assert stats.groups['all']['avg_tm_words'] == 2.0
        assert stats.groups['all']['video_count'] == 1
        assert stats.groups['test']['video_count'] == 0
        assert stats.proportion_hist[-1] == (14.0, 15.0, 1)
        positions = dict(((s, e), c) for s, e, c in stats.position_hist)
        assert positions[(0.3, 0.35)] == 1
        self.assertRaises(InvalidInput, compute_stats, [])

    def test_fixture_stats(self):
        triplets, _ = build_dataset(ingest(fixture_path('annotations.jsonl')))
        stats = compute_stats(triplets)
        groups = stats.groups
        assert groups['all']['video_count'] == 7
        assert sum(groups[name]['video_count'] for name in ('train', 'validation', 'test')) == 7
        assert sum(c for _, _, c in stats.proportion_hist) == 7
        assert stats.proportion_hist[-1][2] == 7
        assert sum(c for _, _, c in stats.position_hist) == 7
        self.assert_close(groups['all']['total_length_h'], (40 + 20 + 40 + 41 + 30 + 20 + 20) / 3600.0)
        back = DatasetStats.from_dict(json.loads(json.dumps(stats.as_dict())))
        assert back.groups["all"] == groups["all"]
        assert back.proportion_hist == stats.proportion_hist


class TestPreservation(TestBase):

    def _triplet(self, video_id, scores, intervals):
        tl = ClipTimeline.from_scores(scores)
        return BidsTriplet(video_id, 'q', tl, VMSummary(intervals, tl.video_duration_s, 1.0), 'train',
                           (video_id, 0, ()))

    def test_top_clips_maximize_rho(self):
        for _ in range(20):
            scores = list(self.rng.permutation(8))
            top = np.argsort(scores)[::-1][:2]
            report = validate_saliency_preservation(
                [self._triplet('v', scores, [(2.0 * i, 2.0 * i + 2) for i in top])], fps=2)
            best = report.per_video[0][1]
            frames = ClipTimeline.from_scores(scores).frame_scores(2)
            for pair in combinations(range(8), 2):
                sel = np.zeros(len(frames))
                for i in pair:
                    sel[4 * i:4 * i + 4] = 1
                assert spearman_rho(frames, sel) <= best + 1e-12
            # END for each selection
        # END for each video

    def test_random_selection(self):
        triplets = list()
        for i in range(300):
            start = float(self.rng.integers(0, 17))
            triplets.append(self._triplet("v%i" % i, list(self.rng.random(10)), [(start, start + 3)]))
        # END for each video
        report = validate_saliency_preservation(triplets, fps=2)
        assert abs(report.mean_rho) < 0.1
        assert len(report.per_video) == 300

    def test_fixture(self):
        triplets, _ = build_dataset(ingest(fixture_path('annotations.jsonl')))
        report = validate_saliency_preservation(triplets)
        assert report.excluded == ('vidF_8', )
        assert len(report.per_video) == 6
        assert report.mean_rho > 0.3
        assert 0 <= report.significant_fraction <= 1
        doc = report.as_dict()
        assert doc['excluded'] == ['vidF_8'] and len(doc['per_video']) == 6
        self.assertRaises(InvalidInput, validate_saliency_preservation, [])

    def test_knapsack_comparison(self):
        timelines = dict(("t%i" % i, make_timeline(self.rng, 20)) for i in range(20))
        extracted, knapsack = compare_to_knapsack(timelines)
        assert len(extracted.per_video) + len(extracted.excluded) == 20
        assert len(knapsack.per_video) + len(knapsack.excluded) == 20
        for report in (extracted, knapsack):
            assert all(-1 <= r <= 1 for r in report.rhos)
        # END for each report


class TestSerialization(TestBase):

    @with_rw_directory
    def test_write_dataset(self, path):
        records = ingest(fixture_path('annotations.jsonl'))
        triplets, rejections = build_dataset(records, seed=3)
        written = write_dataset(path, triplets, rejections, compute_stats(triplets))
        names = sorted(os.path.basename(p) for p in written)
        assert names == ['position_hist.csv', 'proportion_hist.csv', 'rejections.jsonl', 'stats.csv',
                         'stats.json', 'triplets.jsonl']

        back = read_triplets(os.path.join(path, 'triplets.jsonl'))
        assert back == triplets
        with open(os.path.join(path, 'rejections.jsonl')) as fp:
            reasons = [json.loads(line)['reason'] for line in fp]
        assert reasons == ['no_segments', 'low_coverage', 'duplicate']

        # identical input gives identical bytes
        first = dict((p, read_bytes(p)) for p in written)
        other = os.path.join(path, 'again')
        triplets, rejections = build_dataset(ingest(fixture_path('annotations.jsonl')), seed=3)
        for p in write_dataset(other, triplets, rejections, compute_stats(triplets)):
            assert read_bytes(p) == first[os.path.join(path, os.path.basename(p))]
        # END for each file

    @with_rw_directory
    def test_golden_files(self, path):
        triplets, rejections = build_dataset(ingest(fixture_path('annotations.jsonl')))
        written = write_dataset(path, triplets, rejections, compute_stats(triplets))
        assert len(written) == 6
        for p in written:
            name = os.path.basename(p)
            assert read_bytes(p) == read_bytes(fixture_path(os.path.join('golden', name))), name
        # END for each file

    @with_rw_directory
    def test_read_triplets_errors(self, path):
        fpath = write_text(os.path.join(path, 't.jsonl'), '{"video_id": "x"}\n')
        try:
            read_triplets(fpath)
        except SchemaError as e:
            assert e.line == 1
        else:
            self.fail("expected a schema error")
        # END handle error

    @with_rw_directory
    def test_score_files(self, path):
        fpath = write_text(os.path.join(path, 's.json'), '[1, 1, 3]')
        (video_id, tl), = read_score_file(fpath)
        assert video_id == '0' and tl.video_duration_s == 6.0

        write_text(fpath, '{"video_id": "a", "scores": [1, 2], "duration_s": 3.5}\n'
                          '{"video_id": "b", "scores": [0, 0, 1]}\n')
        entries = read_score_file(fpath)
        assert [v for v, _ in entries] == ['a', 'b']
        assert entries[0][1].video_duration_s == 3.5

        write_text(fpath, '[[1, 2], [3]]')
        assert [v for v, _ in read_score_file(fpath)] == ['0', '1']

        for text in ('', '[]', '{"video_id": "a", "scores": []}', '{"scores": [1]}',
                     '{"video_id": "a", "scores": [1]}\n{"video_id": "a", "scores": [2]}\n',
                     '{"video_id": "a", "scores": [1, 2], "duration_s": 9}'):
            write_text(fpath, text)
            self.assertRaises(SchemaError, read_score_file, fpath)
        # END for each invalid file

        write_text(fpath, '[1, 2]\n[3, \n')
        try:
            read_score_file(fpath)
        except ParseError as e:
            assert e.line == 2
        else:
            self.fail("expected a parse error")
        # END handle error

        # an indented document reports the line it breaks on
        write_text(fpath, '[\n  [1, 2],\n  [3, 4]\n  [5]\n]\n')
        try:
            read_score_file(fpath)
        except ParseError as e:
            assert e.line == 4
        else:
            self.fail("expected a parse error")
        # END handle error
