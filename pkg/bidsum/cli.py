# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Command line interface.

Every subcommand reads its settings from flags, an optional configuration file
of ``key = value`` lines given with ``--config``, and the library defaults, in
this order of precedence. Exit codes are 0 on success, 1 on usage errors, 2 on
invalid or missing input and 3 on runtime failures."""
import argparse
import json
import logging
import os
import sys
from collections import OrderedDict

import bidsum
from bidsum.const import (
    BUDGET_RATIO,
    CLIP_DURATION_S,
    FPS,
    MIN_COVERAGE,
    MIN_SEGMENT_S,
    SINKHORN_ITERATIONS,
    SPLIT_FRACTIONS,
    TEMPERATURE,
    TOP_RATIO
)
from bidsum.dataset import (
    build_dataset,
    compute_stats,
    DatasetStats,
    ingest,
    read_score_file,
    read_triplets,
    validate_saliency_preservation,
    write_dataset
)
from bidsum.exc import (
    BidsError,
    InvalidInput,
    ParseError,
    TrainingFailure,
    UsageError
)
from bidsum.metrics import evaluate_corpus
from bidsum.report import (
    csv_text,
    dumps_jsonl,
    histogram_svg,
    history_rows,
    history_svg,
    read_history,
    read_json,
    write_history,
    write_json,
    write_report
)
from bidsum.scorer.base import EncoderConfig
from bidsum.scorer.bench import make_distorted_benchmark
from bidsum.scorer.train import (
    evaluate_scorer,
    save_checkpoint,
    smoothness_report,
    train
)
from bidsum.summary import extract_vm_summary
from bidsum.typ import (
    benchmark_kinds,
    loss_aliases,
    loss_kinds,
    optimizer_kinds,
    scorer_kinds,
    str_adam_optimizer,
    str_distorted_benchmark,
    str_encoder_scorer,
    str_neural_ndcg_loss
)
from bidsum.util import (
    coerce_config,
    join,
    read_config,
    write_atomic
)

log = logging.getLogger(__name__)

__all__ = ('main', 'make_parser')

#{ Exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_RUNTIME = 3
#} END exit codes


#{ Utilities

class _Parser(argparse.ArgumentParser):

    """Parser raising UsageError instead of exiting, so all errors share one exit path"""

    def error(self, message):
        raise UsageError(message)


def fractions(text):
    """:return: tuple of floats of a comma separated list"""
    return tuple(float(v) for v in text.split(','))


def _colored(text):
    if sys.stderr.isatty() and 'NO_COLOR' not in os.environ:
        return "\033[31m%s\033[0m" % text
    return text


def _report_error(message):
    sys.stderr.write("%s %s\n" % (_colored("bidsum: error:"), message))


def _setup_logging(verbose):
    root = logging.getLogger('bidsum')
    handler = getattr(_setup_logging, 'handler', None)
    if handler is None or handler not in root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(name)s: %(levelname)s: %(message)s"))
        root.addHandler(handler)
        _setup_logging.handler = handler
    # END install handler once
    handler.stream = sys.stderr
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _settings(args, options):
    """Resolve the settings of a subcommand

    :param options: ordered dict mapping option names to tuple(type, default)
    :return: dict of option names to values
    :raise UsageError: on unknown configuration keys or malformed values"""
    config = dict()
    if args.config:
        config = coerce_config(read_config(args.config), dict((n, t) for n, (t, _) in options.items()))
    settings = dict()
    for name, (_, default) in options.items():
        value = getattr(args, name)
        if value is None:
            value = config.get(name, default)
        settings[name] = value
    # END for each option
    return settings


def _require(settings, *names):
    for name in names:
        if settings[name] is None:
            raise UsageError("--%s is required" % name.replace('_', '-'))
    # END for each name


def _check_budget(budget):
    if not 0 < budget <= 1:
        raise UsageError("--budget must be in (0, 1], got %g" % budget)


def _loss_kind(text):
    kind = loss_aliases.get(text, text)
    if kind not in loss_kinds:
        raise ValueError(text)
    return kind

#} END utilities


#{ Subcommands

BUILD_OPTIONS = OrderedDict((
    ('annotations', (str, None)),
    ('out', (str, None)),
    ('budget', (float, BUDGET_RATIO)),
    ('seed', (int, 0)),
    ('splits', (fractions, SPLIT_FRACTIONS)),
    ('min_segment', (float, MIN_SEGMENT_S)),
    ('min_coverage', (float, MIN_COVERAGE)),
    ('clip_duration', (float, CLIP_DURATION_S)),
    ('fps', (float, FPS)),
))


def cmd_build_dataset(args):
    """Build triplets from an annotation file and write them with their statistics"""
    s = _settings(args, BUILD_OPTIONS)
    _require(s, 'annotations', 'out')
    _check_budget(s['budget'])
    if len(s['splits']) != 3 or abs(sum(s['splits']) - 1) > 1e-9 or min(s['splits']) < 0:
        raise UsageError("--splits needs three non-negative fractions summing to 1")

    records = ingest(s['annotations'], s['clip_duration'])
    triplets, rejections = build_dataset(records, s['budget'], s['splits'], s['seed'],
                                         s['min_segment'], s['min_coverage'])
    if not triplets:
        raise InvalidInput("no triplets were built from %i records" % len(records))
    stats = compute_stats(triplets)
    write_dataset(s['out'], triplets, rejections, stats)
    preservation = validate_saliency_preservation(triplets, s['fps'])
    write_json(join(s['out'], 'preservation.json'), preservation.as_dict())
    sys.stdout.write("%i triplets, %i rejected, mean rho %.4f\n"
                     % (len(triplets), len(rejections), preservation.mean_rho))
    return EXIT_OK


EXTRACT_OPTIONS = OrderedDict((
    ('scores', (str, None)),
    ('out', (str, None)),
    ('budget', (float, BUDGET_RATIO)),
    ('fps', (float, FPS)),
    ('clip_duration', (float, CLIP_DURATION_S)),
))


def cmd_extract(args):
    """Extract the visual summary of every timeline of a score file"""
    s = _settings(args, EXTRACT_OPTIONS)
    _require(s, 'scores', 'out')
    _check_budget(s['budget'])
    if not s['fps'] > 0:
        raise UsageError("--fps must be positive")

    docs = list()
    for video_id, timeline in read_score_file(s['scores'], s['clip_duration']):
        summary = extract_vm_summary(timeline, s['budget'])
        docs.append({
            'video_id': video_id,
            'duration_s': timeline.video_duration_s,
            'budget_ratio': s['budget'],
            'intervals': [list(iv) for iv in summary.intervals],
            'fps': s['fps'],
            'frames': summary.rasterize(s['fps']).as_string(),
        })
    # END for each timeline
    write_atomic(s['out'], dumps_jsonl(docs))
    return EXIT_OK


EVALUATE_OPTIONS = OrderedDict((
    ('pred', (str, None)),
    ('gt', (str, None)),
    ('tm_similarity', (str, None)),
    ('out', (str, None)),
    ('format', (str, 'json')),
    ('budget', (float, BUDGET_RATIO)),
    ('fps', (float, FPS)),
    ('top_ratio', (float, TOP_RATIO)),
    ('clip_duration', (float, CLIP_DURATION_S)),
))


def _read_ground_truth(filepath, clip_duration_s):
    """:return: tuple(timelines, intervals) read from a triplets file or a score file.
        intervals is None for score files"""
    first = None
    with open(filepath, 'r', encoding='utf-8') as fp:
        for line in fp:
            if line.strip():
                first = line
                break
        # END for each line
    # END peek first line
    try:
        is_triplets = isinstance(json.loads(first), dict) and 'saliency' in json.loads(first)
    except (TypeError, ValueError):
        is_triplets = False
    if is_triplets:
        triplets = read_triplets(filepath)
        return (dict((t.video_id, t.timeline) for t in triplets),
                dict((t.video_id, t.vm_summary.intervals) for t in triplets))
    return dict(read_score_file(filepath, clip_duration_s)), None


def cmd_evaluate(args):
    """Evaluate predicted saliency, and optionally text similarities, against ground truth"""
    s = _settings(args, EVALUATE_OPTIONS)
    _require(s, 'pred', 'gt', 'out')
    _check_budget(s['budget'])
    if s['format'] not in ('json', 'csv'):
        raise UsageError("--format must be json or csv, got %r" % s['format'])

    ground_truth, intervals = _read_ground_truth(s['gt'], s['clip_duration'])
    predictions = dict((vid, tl.scores) for vid, tl in read_score_file(s['pred'], s['clip_duration']))
    similarities = None
    if s['tm_similarity']:
        similarities = dict((vid, tl.scores) for vid, tl in read_score_file(s['tm_similarity'], s['clip_duration']))
    report = evaluate_corpus(predictions, ground_truth, similarities, intervals, top_ratio=s['top_ratio'],
                             budget_ratio=s['budget'], fps=s['fps'])
    write_report(s['out'], report, s['format'])
    return EXIT_OK


TRAIN_OPTIONS = OrderedDict((
    ('loss', (_loss_kind, str_neural_ndcg_loss)),
    ('model', (str, str_encoder_scorer)),
    ('epochs', (int, 100)),
    ('seed', (int, 0)),
    ('benchmark', (str, str_distorted_benchmark)),
    ('out', (str, None)),
    ('lr', (float, 0.01)),
    ('optimizer', (str, str_adam_optimizer)),
    ('batch_size', (int, None)),
    ('videos', (int, 40)),
    ('clips', (int, 20)),
    ('dim', (int, 16)),
    ('layers', (int, 2)),
    ('heads', (int, 2)),
    ('k', (int, None)),
    ('temperature', (float, TEMPERATURE)),
    ('iterations', (int, SINKHORN_ITERATIONS)),
))


def cmd_train_toy(args):
    """Train a toy scorer on a synthetic benchmark, write checkpoint and history"""
    s = _settings(args, TRAIN_OPTIONS)
    _require(s, 'out')
    if s['epochs'] < 1:
        raise UsageError("--epochs must be at least 1, got %i" % s['epochs'])
    for name, kinds in (('model', scorer_kinds), ('benchmark', benchmark_kinds), ('optimizer', optimizer_kinds)):
        if s[name] not in kinds:
            raise UsageError("--%s must be one of %s, got %r" % (name, ', '.join(kinds), s[name]))
    # END for each choice
    try:
        config = EncoderConfig(num_layers=s['layers'], model_dim=s['dim'], num_heads=s['heads'], seed=s['seed'])
    except InvalidInput as e:
        raise UsageError(str(e)) from e

    train_set, validation = make_distorted_benchmark(s['videos'], s['clips'], s['seed'], s['dim'],
                                                     distorted=s['benchmark'] == str_distorted_benchmark)
    params, history = train(train_set, s['loss'], s['epochs'], s['lr'], seed=s['seed'], scorer=s['model'],
                            config=config, validation=validation, optimizer=s['optimizer'],
                            batch_size=s['batch_size'], k=s['k'], temperature=s['temperature'],
                            sinkhorn_iterations=s['iterations'])

    os.makedirs(s['out'], exist_ok=True)
    save_checkpoint(join(s['out'], 'checkpoint.json'), params)
    write_history(join(s['out'], 'history.csv'), history)
    scores = evaluate_scorer(params, validation)
    smooth = smoothness_report(params, validation)
    summary = OrderedDict((
        ('loss', s['loss']),
        ('model', s['model']),
        ('benchmark', s['benchmark']),
        ('epochs', s['epochs']),
        ('seed', s['seed']),
        ('val_ndcg@15', scores['ndcg@15']),
        ('val_ndcg@all', scores['ndcg@all']),
        ('val_kendall_tau', scores['kendall_tau']),
        ('val_spearman_rho', scores['spearman_rho']),
        ('val_smoother_fraction', smooth.smoother_fraction),
    ))
    write_json(join(s['out'], 'summary.json'), summary)
    sys.stdout.write("ndcg@15 %.4f ndcg@all %.4f tau %.4f rho %.4f\n"
                     % (scores['ndcg@15'], scores['ndcg@all'], scores['kendall_tau'], scores['spearman_rho']))
    return EXIT_OK


PLOT_OPTIONS = OrderedDict((
    ('stats', (str, None)),
    ('history', (str, None)),
    ('out', (str, None)),
    ('histogram', (str, 'proportion')),
))


def cmd_plot(args):
    """Render statistics histograms or a training history as SVG or CSV"""
    s = _settings(args, PLOT_OPTIONS)
    _require(s, 'out')
    if bool(s['stats']) == bool(s['history']):
        raise UsageError("exactly one of --stats and --history is required")
    ext = os.path.splitext(s['out'])[1].lower()
    if ext not in ('.svg', '.csv'):
        raise UsageError("--out must end in .svg or .csv, got %r" % s['out'])
    if s['histogram'] not in ('proportion', 'position'):
        raise UsageError("--histogram must be proportion or position")

    if s['stats']:
        try:
            stats = DatasetStats.from_dict(read_json(s['stats']))
        except (KeyError, TypeError) as e:
            raise UsageError("%s is not a statistics file" % s['stats']) from e
        if s['histogram'] == 'proportion':
            bins, title, xlabel = stats.proportion_hist, 'summary duration ratio', 'proportion of video (%)'
        else:
            bins, title, xlabel = stats.position_hist, 'summary segment position', 'position in video'
        if ext == '.svg':
            text = histogram_svg(bins, title, xlabel)
        else:
            text = csv_text(('bin_start', 'bin_end', 'count'), bins)
    else:
        try:
            history = read_history(s['history'])
        except ParseError as e:
            raise UsageError("%s is not a training history: %s" % (s['history'], e.message)) from e
        text = history_svg(history) if ext == '.svg' else csv_text(*history_rows(history))
    # END handle input kind
    write_atomic(s['out'], text)
    return EXIT_OK

#} END subcommands


def _add_options(parser, options, helps):
    for name in options:
        flag = '--' + name.replace('_', '-')
        kind = options[name][0]
        parser.add_argument(flag, dest=name, type=kind, default=None, metavar=name.upper(),
                            help=helps.get(name))
    # END for each option


def make_parser():
    """:return: the argument parser of the bidsum command"""
    common = _Parser(add_help=False)
    common.add_argument('--config', metavar='PATH', help="file of 'key = value' lines providing defaults")
    common.add_argument('-v', '--verbose', action='store_true', help="log debug messages")

    parser = _Parser(prog='bidsum', description="bimodal video summarization toolkit")
    parser.add_argument('--version', action='version', version="%(prog)s " + bidsum.__version__)
    sub = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=_Parser)
    sub.required = True

    commands = (
        ('build-dataset', cmd_build_dataset, BUILD_OPTIONS, {
            'annotations': "annotation file, one JSON object per line",
            'out': "output directory",
            'splits': "train,validation,test fractions",
        }),
        ('extract', cmd_extract, EXTRACT_OPTIONS, {
            'scores': "JSON array of scores, or one timeline per line",
            'out': "output file, one JSON object per timeline",
        }),
        ('evaluate', cmd_evaluate, EVALUATE_OPTIONS, {
            'pred': "predicted scores per video",
            'gt': "triplets file or scores per video",
            'tm_similarity': "text to clip similarities per video",
            'format': "json or csv",
        }),
        ('train-toy', cmd_train_toy, TRAIN_OPTIONS, {
            'loss': "mse or neuralndcg",
            'model': "encoder or linear",
            'benchmark': "distorted or control",
            'out': "output directory",
        }),
        ('plot', cmd_plot, PLOT_OPTIONS, {
            'stats': "stats.json written by build-dataset",
            'history': "history.csv written by train-toy",
            'out': "output file ending in .svg or .csv",
            'histogram': "proportion or position",
        }),
    )
    for name, func, options, helps in commands:
        cmd = sub.add_parser(name, parents=[common], help=func.__doc__)
        _add_options(cmd, options, helps)
        cmd.set_defaults(func=func)
    # END for each command
    return parser


def main(argv=None):
    """Run the bidsum command

    :return: exit code"""
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        _setup_logging(args.verbose)
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(parser.format_usage())
        _report_error(str(e))
        return EXIT_USAGE
    except (InvalidInput, ParseError) as e:
        _report_error(str(e))
        return EXIT_INPUT
    except FileNotFoundError as e:
        _report_error("%s: %s" % (e.filename, e.strerror))
        return EXIT_INPUT
    except TrainingFailure as e:
        _report_error(str(e))
        return EXIT_RUNTIME
    except (BidsError, OSError) as e:
        _report_error(str(e))
        return EXIT_RUNTIME
    # END handle errors
