# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Serialization of reports, histories and statistics to JSON, CSV and SVG.

Every writer produces byte-identical output for identical input: JSON keys are
sorted, floats use their shortest round-tripping representation and nothing
depends on time, locale or host."""
import csv
import html
import io
import json
import math
import re

import matplotlib
from matplotlib.figure import Figure
import numpy as np

from bidsum.exc import ParseError
from bidsum.util import (
    iter_lines,
    write_atomic
)

__all__ = ('dumps_json', 'write_json', 'read_json', 'iter_jsonl', 'dumps_jsonl', 'csv_text', 'write_csv',
           'read_csv', 'format_float', 'report_as_dict', 'report_rows', 'write_report', 'HistoryRecord',
           'history_rows', 'write_history', 'read_history', 'histogram_svg', 'history_svg', 'read_svg_data')

# name of the row holding corpus means in report CSVs
CORPUS_ROW = '__corpus__'


#{ JSON

def _plain(obj):
    """:return: obj converted into types json can encode, non-finite floats become None"""
    if isinstance(obj, dict):
        return dict((str(k), _plain(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else None
    return obj


def dumps_json(obj):
    """:return: canonical JSON text of obj with sorted keys and a trailing newline"""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + '\n'


def dumps_jsonl(objects):
    """:return: one compact canonical JSON document per line"""
    return ''.join(json.dumps(_plain(o), sort_keys=True, separators=(',', ':'), allow_nan=False) + '\n'
                   for o in objects)


def write_json(filepath, obj):
    return write_atomic(filepath, dumps_json(obj))


def read_json(filepath):
    """:return: decoded JSON document
    :raise ParseError: naming the line of malformed input"""
    with open(filepath, 'r', encoding='utf-8') as fp:
        text = fp.read()
    try:
        return json.loads(text)
    except ValueError as e:
        raise ParseError("malformed JSON: %s" % getattr(e, 'msg', e), filepath, getattr(e, 'lineno', None)) from e


def iter_jsonl(filepath):
    """:return: iterator yielding tuple(line_number, object) of each non-empty line
    :raise ParseError: for the first line which is not valid JSON"""
    for lineno, line in iter_lines(filepath):
        try:
            yield lineno, json.loads(line)
        except ValueError as e:
            raise ParseError("malformed JSON: %s" % getattr(e, 'msg', e), filepath, lineno) from e
    # END for each line

#} END JSON


#{ CSV

def format_float(value):
    """:return: shortest round-tripping text of value, empty for NaN"""
    value = float(value)
    if math.isnan(value):
        return ''
    return repr(value)


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def csv_text(header, rows):
    """:return: CSV text with unix line endings"""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_csv(filepath, header, rows):
    return write_atomic(filepath, csv_text(header, rows))


def read_csv(filepath):
    """:return: tuple(header, rows) with rows as lists of strings
    :raise ParseError: if the file is empty"""
    with open(filepath, 'r', encoding='utf-8', newline='') as fp:
        rows = list(csv.reader(fp))
    if not rows:
        raise ParseError("empty CSV file", filepath, 1)
    return rows[0], rows[1:]

#} END CSV


#{ Metric reports

def report_as_dict(report):
    """:return: dict of the MetricReport, ready for dumps_json"""
    return {
        'fields': list(report.fields),
        'per_video': report.per_video,
        'corpus': report.corpus,
    }


def report_rows(report):
    """:return: tuple(header, rows): one row per video and a final row of corpus means"""
    header = ['video_id'] + list(report.fields)
    rows = list()
    for video_id, values in report.per_video.items():
        rows.append([video_id] + [values.get(f, float('nan')) for f in report.fields])
    rows.append([CORPUS_ROW] + [report.corpus[f] for f in report.fields])
    return header, rows


def write_report(filepath, report, format='json'):
    """Write the MetricReport as JSON or CSV document"""
    if format == 'csv':
        return write_csv(filepath, *report_rows(report))
    return write_json(filepath, report_as_dict(report))

#} END metric reports


#{ Training history

class HistoryRecord(tuple):

    """Metrics recorded after one training epoch"""
    __slots__ = tuple()

    # CSV columns
    columns = ('epoch', 'train_loss', 'val_ndcg@15', 'val_ndcg@all')

    def __new__(cls, epoch, train_loss, val_ndcg_15, val_ndcg_all):
        return tuple.__new__(cls, (int(epoch), float(train_loss), float(val_ndcg_15), float(val_ndcg_all)))

    @property
    def epoch(self):
        return self[0]

    @property
    def train_loss(self):
        return self[1]

    @property
    def val_ndcg_15(self):
        return self[2]

    @property
    def val_ndcg_all(self):
        return self[3]


def history_rows(history):
    return list(HistoryRecord.columns), [list(record) for record in history]


def write_history(filepath, history):
    return write_csv(filepath, *history_rows(history))


def read_history(filepath):
    """:return: list of HistoryRecord
    :raise ParseError: if columns are missing or values are malformed"""
    header, rows = read_csv(filepath)
    if tuple(header) != HistoryRecord.columns:
        raise ParseError("expected columns %s, got %s" % (','.join(HistoryRecord.columns), ','.join(header)),
                         filepath, 1)
    history = list()
    for lineno, row in enumerate(rows, 2):
        try:
            history.append(HistoryRecord(*[float(v) if v else float('nan') for v in row]))
        except (TypeError, ValueError) as e:
            raise ParseError("malformed history row %r" % (row, ), filepath, lineno) from e
    # END for each row
    return history

#} END training history


#{ SVG

# figure size in inches, at 100 dpi
FIGSIZE = (6.4, 4.0)
# matplotlib derives element ids from this salt instead of a random one
SVG_HASHSALT = 'bidsum'
_SVG_RC = {'svg.hashsalt': SVG_HASHSALT, 'svg.fonttype': 'none'}
_DATA_RE = re.compile(r'<dc:description>(.*?)</dc:description>', re.S)


def _render_svg(fig, data):
    """:return: SVG text of the given figure with the plotted data stored as JSON
        in its description metadata. The output holds no date and is stable across runs"""
    buf = io.StringIO()
    with matplotlib.rc_context(_SVG_RC):
        fig.savefig(buf, format='svg', metadata={
            'Date': None,
            'Description': json.dumps(_plain(data), sort_keys=True),
        })
    # END pin svg ids
    return buf.getvalue()


def read_svg_data(svg):
    """:return: the plotted data stored in an SVG written by this module
    :raise ValueError: if the SVG carries no data"""
    match = _DATA_RE.search(svg)
    if match is None:
        raise ValueError("SVG does not contain plot data")
    return json.loads(html.unescape(match.group(1)))


def histogram_svg(bins, title, xlabel, ylabel='count'):
    """Render a histogram as bars

    :param bins: sequence of (bin_start, bin_end, count), may be empty
    :return: SVG text"""
    bins = [(float(s), float(e), int(c)) for s, e, c in bins]
    fig = Figure(figsize=FIGSIZE)
    ax = fig.subplots()
    if bins:
        ax.bar([s for s, _, _ in bins], [c for _, _, c in bins], width=[e - s for s, e, _ in bins],
               align='edge', color='steelblue', edgecolor='white')
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    return _render_svg(fig, {'bins': bins})


def history_svg(history, title='training history'):
    """Render training loss and validation NDCG per epoch.

    The loss uses the left axis, both NDCG series share the right one. NaN
    values leave gaps

    :return: SVG text"""
    epochs = [r.epoch for r in history]
    series = (
        ('train_loss', [r.train_loss for r in history]),
        ('val_ndcg@15', [r.val_ndcg_15 for r in history]),
        ('val_ndcg@all', [r.val_ndcg_all for r in history]),
    )
    fig = Figure(figsize=FIGSIZE)
    ax = fig.subplots()
    ax_ndcg = ax.twinx()
    lines = list()
    for (name, values), axis, color in zip(series, (ax, ax_ndcg, ax_ndcg), ('firebrick', 'steelblue', 'seagreen')):
        lines.extend(axis.plot(epochs, values, color=color, label=name))
    # END for each series
    ax.set_title(title)
    ax.set_xlabel('epoch')
    ax.set_ylabel('loss')
    ax_ndcg.set_ylabel('NDCG')
    if history:
        ax.legend(lines, [l.get_label() for l in lines], loc='center right')

    data = dict(series)
    data['epoch'] = epochs
    return _render_svg(fig, data)

#} END SVG
