#
# Copyright 2026 fingerprint-dedup developers
#
# ### MIT license
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#
"""Cluster fingerprint signatures by grid-count index, identify queries and find duplicates.

Exit codes: 0 success, 2 usage error, 3 data error, 4 exhaustive comparison cap exceeded.
"""

import argparse
import csv
import logging
import os
import sys

from . import __version__
from .exceptions import OracleCapExceededError
from .models.cluster_table import ClusterTable
from .models.corpus import (
    SignatureStore, index_corpus, read_ground_truth, read_signature_file, write_corpus, write_ground_truth)
from .models.settings import CONFIG_ENV_VAR, DEFAULTS, Settings, config_file_from_environment
from .utils.bench import scaling_run, write_bench_csv
from .utils.dedup import deduplicate, exhaustive_dedup
from .utils.evaluation import cross_key_leakage, evaluate_against_ground_truth, oracle_disagreements
from .utils.identify import identify
from .utils.logging import _log_nested, setup_logging
from .utils.stats import (
    EXTRAPOLATION_SIZES, PUBLISHED_SIZE_AVG, corpus_stats, estimate_workload, fit_regression,
    format_duration, format_stats_text, predict_avg, read_points, write_stats_csv)
from .utils.synthgen import GenSpec, generate

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_USAGE = 2
EXIT_DATA_ERROR = 3
EXIT_CAP_EXCEEDED = 4

GROUND_TRUTH_FILE = 'ground_truth.tsv'


# in order to have both:
# * preformatted help text and ...
# * automatic display of defaults
class ArgumentDefaultsAndRawDescriptionHelpFormatter(
        argparse.ArgumentDefaultsHelpFormatter, argparse.RawDescriptionHelpFormatter):
    pass


def _out(line=''):
    sys.stdout.write(f"{line}\n")


def _number(value):
    """Integral floats without decimals, others in full precision."""
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _csv_requested(args, settings):
    return getattr(args, 'csv', False) or settings.output_format == 'csv'


def _store_from_args(args, settings):
    if getattr(args, 'manifest', None) is not None:
        return SignatureStore.from_manifest(args.manifest)
    return SignatureStore.from_directory(args.corpus, suffix=settings.signature_suffix)


def _table_from_store(store, settings):
    keys = index_corpus(store, settings.grid_params, jobs=settings.jobs)
    return ClusterTable.load(keys, grid_n=settings.grid_n)


# subcommands

def do_index(args, settings):
    store = _store_from_args(args, settings)
    table = _table_from_store(store, settings)
    table.save(args.table)
    _out(f"records\t{table.size}")
    _out(f"buckets\t{table.nb_buckets}")
    return EXIT_SUCCESS


def do_identify(args, settings):
    table = ClusterTable.load_file(args.table)
    if table.grid_n is not None and getattr(args, 'grid_n', None) is None:
        settings.grid_n = table.grid_n
    store = _store_from_args(args, settings)
    query = read_signature_file(args.query)
    result = identify(query, table, store, grid_params=settings.grid_params,
                      match_params=settings.match_params)

    if _csv_requested(args, settings):
        writer = csv.writer(sys.stdout, lineterminator='\n')
        writer.writerow(['record_id', 'score', 'matched_descriptors', 'match'])
        for c in result.candidates:
            writer.writerow([c.record_id, f"{c.score:.4f}", c.matched_descriptors, int(c.is_match)])
        writer.writerow(['penetration', f"{result.penetration:.6f}"])
    else:
        for c in result.candidates:
            _out(f"{c.record_id}\t{c.score:.4f}\t{'match' if c.is_match else 'no-match'}")
        _out(f"penetration\t{result.penetration:.6f}")
    return EXIT_SUCCESS


def do_dedup(args, settings):
    store = _store_from_args(args, settings)
    if args.table is not None:
        table = ClusterTable.load_file(args.table)
    else:
        table = _table_from_store(store, settings)

    report = deduplicate(table, store, match_params=settings.match_params, jobs=settings.jobs)
    if args.report is not None:
        report.save(args.report)
    else:
        for line in report.to_lines():
            _out(line)

    stats = corpus_stats(table, report, name=args.name)
    if _csv_requested(args, settings):
        write_stats_csv([stats], sys.stdout)
    else:
        _out(format_stats_text(stats))

    if args.oracle:
        groups = exhaustive_dedup(store, match_params=settings.match_params, cap=settings.oracle_cap)
        disagreements = oracle_disagreements(report, groups, table)
        for a, b in disagreements:
            logger.warning("Sweep and exhaustive grouping disagree on '%s', '%s'.", a, b)
        _out(f"oracle-disagreements\t{len(disagreements)}")

    if args.ground_truth is not None:
        truth = read_ground_truth(args.ground_truth)
        evaluation = evaluate_against_ground_truth(report, truth)
        for key, value in evaluation.as_dict().items():
            _out(f"{key}\t{value:.4f}" if isinstance(value, float) else f"{key}\t{value}")
        _out(f"cross-key-leakage\t{cross_key_leakage(truth, table.key_of)}")
    return EXIT_SUCCESS


def do_oracle(args, settings):
    store = _store_from_args(args, settings)
    cap = args.cap if args.cap is not None else settings.oracle_cap
    groups = exhaustive_dedup(store, match_params=settings.match_params, cap=cap)
    for group in groups:
        _out(','.join(group))
    _out(f"groups\t{len(groups)}")
    _out(f"duplicate-groups\t{sum(1 for g in groups if len(g) >= 2)}")
    return EXIT_SUCCESS


def do_stats(args, settings):
    if args.table is not None:
        table = ClusterTable.load_file(args.table)
        default_name = os.path.basename(args.table)
    else:
        table = _table_from_store(_store_from_args(args, settings), settings)
        default_name = os.path.basename(os.path.normpath(args.corpus or args.manifest))
    stats = corpus_stats(table, name=args.name if args.name is not None else default_name)
    if _csv_requested(args, settings):
        write_stats_csv([stats], sys.stdout)
    else:
        _out(format_stats_text(stats))
    return EXIT_SUCCESS


def do_regress(args, settings):
    points = read_points(args.points) if args.points is not None else PUBLISHED_SIZE_AVG
    fit = fit_regression(points)
    sizes = args.predict if args.predict else [int(x) for x, _ in points] + EXTRAPOLATION_SIZES
    if _csv_requested(args, settings):
        writer = csv.writer(sys.stdout, lineterminator='\n')
        writer.writerow(['slope', repr(fit.slope)])
        writer.writerow(['intercept', repr(fit.intercept)])
        writer.writerow(['size', 'predicted_avg'])
        for n in sizes:
            writer.writerow([n, f"{predict_avg(fit, n):.9f}"])
    else:
        _out(f"slope\t{fit.slope!r}")
        _out(f"intercept\t{fit.intercept!r}")
        for n in sizes:
            _out(f"{n}\t{predict_avg(fit, n):.9f}")
    return EXIT_SUCCESS


def do_estimate(args, settings):
    estimate = estimate_workload(args.n, args.avg, args.ms_per_cmp)
    _out(f"classes\t{_number(estimate.classes)}")
    _out(f"comparisons-per-class\t{_number(estimate.comparisons_per_class)}")
    _out(f"comparisons\t{_number(estimate.comparisons)}")
    _out(f"wall-time-ms\t{_number(estimate.wall_time_ms)}")
    _out(f"wall-time\t{format_duration(estimate.wall_time_ms)}")
    return EXIT_SUCCESS


def _gen_spec(args, settings, subjects=None):
    return GenSpec(
        subjects=args.subjects if subjects is None else subjects,
        min_minutiae=args.min_minutiae,
        max_minutiae=args.max_minutiae,
        extent=tuple(args.extent),
        dup_fraction=args.dup,
        jitter=args.jitter,
        global_offset=args.offset,
        drop_prob=args.drop,
        min_spacing=settings.min_edge,
        seed=args.seed)


def do_generate(args, settings):
    spec = _gen_spec(args, settings)
    corpus = generate(spec)
    write_corpus(corpus.signatures, args.out, suffix=settings.signature_suffix)
    ground_truth = args.ground_truth if args.ground_truth is not None else os.path.join(args.out, GROUND_TRUTH_FILE)
    write_ground_truth(corpus.truth_pairs, ground_truth)
    _out(f"records\t{len(corpus.signatures)}")
    _out(f"duplicates\t{len(corpus.truth_pairs)}")
    _out(f"ground-truth\t{ground_truth}")
    return EXIT_SUCCESS


def _sizes(text):
    try:
        sizes = [int(s) for s in text.split(',') if len(s.strip()) > 0]
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a comma-separated list of sizes") from None
    if len(sizes) == 0:
        raise argparse.ArgumentTypeError("at least one size required")
    return sizes


def do_bench(args, settings):
    if args.reps is not None:
        settings.repetitions = args.reps
    if args.queries is not None:
        settings.queries = args.queries
    spec = _gen_spec(args, settings, subjects=1)
    rows = scaling_run(args.sizes, spec, grid_params=settings.grid_params, match_params=settings.match_params,
                       repetitions=settings.repetitions, queries=settings.queries, jobs=settings.jobs)
    write_bench_csv(rows, sys.stdout, delimiter=',' if _csv_requested(args, settings) else '\t')
    return EXIT_SUCCESS


def do_config(args, settings):
    if args.export is not None:
        settings.export_config(args.export)
    else:
        sys.stdout.write(settings.to_yaml())
    return EXIT_SUCCESS


# parser

def _add_source_arguments(parser, required=True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument('--corpus', metavar='DIR', help='Directory with one signature file per record')
    group.add_argument('--manifest', metavar='FILE', help="Manifest of 'record_id<TAB>path' lines")
    return group


def _params_parser():
    """Grid and matcher flags shared by every subcommand that indexes or scores."""
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group('index and matcher parameters')
    group.add_argument('--grid-n', type=int, default=argparse.SUPPRESS,
                       help=f"Side of the square block matrix (default: {DEFAULTS['grid-n']})")
    group.add_argument('--min-edge', type=float, default=argparse.SUPPRESS,
                       help=f"Minimum length between two minutiae in pixels (default: {DEFAULTS['min-edge']:g})")
    group.add_argument('--max-edge', type=float, default=argparse.SUPPRESS,
                       help=f"Maximum length between two minutiae in pixels (default: {DEFAULTS['max-edge']:g})")
    group.add_argument('--neighbors-k', type=int, default=argparse.SUPPRESS,
                       help=f"Number of closest neighbors of a minutia (default: {DEFAULTS['neighbors-k']})")
    group.add_argument('--score-threshold', type=float, default=argparse.SUPPRESS,
                       help=f"Matching score threshold, inclusive (default: {DEFAULTS['score-threshold']:g})")
    group.add_argument('--min-matched-descriptors', type=int, default=argparse.SUPPRESS,
                       help=f"Number of matched descriptors required (default: {DEFAULTS['min-matched-descriptors']})")
    group.add_argument('--side-tolerance', type=float, default=argparse.SUPPRESS,
                       help=f"Admissible triangle side difference in pixels (default: {DEFAULTS['side-tolerance']:g})")
    group.add_argument('--angle-tolerance', type=float, default=argparse.SUPPRESS,
                       help=f"Admissible angle difference in radians (default: {DEFAULTS['angle-tolerance']:g})")
    return parser


def _jobs_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--jobs', '-j', type=int, default=argparse.SUPPRESS,
                        help=f"Worker processes, 0 for all cores (default: {DEFAULTS['jobs']})")
    return parser


def _generator_arguments(parser, defaults):
    parser.add_argument('--dup', type=float, default=defaults.dup_fraction,
                        help='Planted duplicates as a fraction of subjects')
    parser.add_argument('--jitter', type=float, default=defaults.jitter,
                        help='Positional noise of duplicates in pixels (standard deviation)')
    parser.add_argument('--offset', type=int, default=defaults.global_offset,
                        help='Largest shift of a duplicate along each axis in pixels')
    parser.add_argument('--drop', type=float, default=defaults.drop_prob,
                        help='Probability of omitting a minutia from a duplicate')
    parser.add_argument('--seed', type=int, default=defaults.seed, help='Random seed')
    parser.add_argument('--min-minutiae', type=int, default=defaults.min_minutiae,
                        help='Smallest number of minutiae per signature')
    parser.add_argument('--max-minutiae', type=int, default=defaults.max_minutiae,
                        help='Largest number of minutiae per signature')
    parser.add_argument('--extent', type=int, nargs=2, default=list(defaults.extent), metavar=('W', 'H'),
                        help='Image width and height in pixels')


def build_parser():
    parser = argparse.ArgumentParser(prog='fingerprint-dedup',
                                     description=__doc__,
                                     formatter_class=ArgumentDefaultsAndRawDescriptionHelpFormatter)

    parser.add_argument('--verbose', '-v', action='count', dest='verbose',
                        default=0, help='Make terminal output more verbose')
    parser.add_argument('--debug', action='store_true',
                        help='Print debug info')
    parser.add_argument('--quiet', '-q', action='store_true',
                        help='Print errors only')
    parser.add_argument('--log', required=False, nargs='?', dest="log",
                        default=None, const='out.log', metavar='LOG',
                        help='Write out.log, optionally specify log file name')
    parser.add_argument('--config', metavar='FILE', default=None,
                        help=f"YAML configuration file, falls back to ${CONFIG_ENV_VAR}")
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    params = _params_parser()
    jobs = _jobs_parser()
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    def add(name, func, help, parents=()):
        p = subparsers.add_parser(name, help=help, description=help, parents=list(parents),
                                  formatter_class=ArgumentDefaultsAndRawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add('index', do_index, 'Index a corpus and write the cluster table', parents=(params, jobs))
    _add_source_arguments(p)
    p.add_argument('--table', metavar='OUT', required=True, help='Cluster table file to write')

    p = add('identify', do_identify, 'Identify a query signature against a cluster table', parents=(params,))
    p.add_argument('--query', metavar='SIGFILE', required=True, help='Signature file of the query')
    p.add_argument('--table', metavar='FILE', required=True, help='Cluster table file')
    _add_source_arguments(p)
    p.add_argument('--csv', action='store_true', help='Write CSV')

    p = add('dedup', do_dedup, 'Find duplicate groups in a corpus', parents=(params, jobs))
    _add_source_arguments(p)
    p.add_argument('--table', metavar='FILE', default=None, help='Prebuilt cluster table of the corpus')
    p.add_argument('--report', metavar='FILE', default=None, help='Write the report to FILE instead of stdout')
    p.add_argument('--oracle', action='store_true', help='Compare with the exhaustive all-pairs grouping')
    p.add_argument('--ground-truth', metavar='FILE', default=None,
                   help="Planted duplicates as 'dup_id<TAB>source_id' lines, report precision and recall")
    p.add_argument('--name', default=None, help='Corpus name in the statistics')
    p.add_argument('--csv', action='store_true', help='Write statistics as CSV')

    p = add('oracle', do_oracle, 'Group a corpus by exhaustive all-pairs comparison', parents=(params,))
    _add_source_arguments(p)
    p.add_argument('--cap', type=int, default=None,
                   help=f"Largest admissible corpus (default: {DEFAULTS['oracle-cap']})")

    p = add('stats', do_stats, 'Class size statistics of a corpus or cluster table', parents=(params, jobs))
    source = _add_source_arguments(p)
    source.add_argument('--table', metavar='FILE', default=None, help='Cluster table file')
    p.add_argument('--name', default=None, help='Corpus name, defaults to the directory or file name')
    p.add_argument('--csv', action='store_true', help='Write CSV')

    p = add('regress', do_regress, 'Fit average class size over corpus size and extrapolate')
    p.add_argument('points', nargs='?', default=None, metavar='POINTS_CSV',
                   help='Two-column CSV of size, average; the published pairs if omitted')
    p.add_argument('--predict', type=int, nargs='+', metavar='N', default=None,
                   help='Sizes to predict the average class size for')
    p.add_argument('--csv', action='store_true', help='Write CSV')

    p = add('estimate', do_estimate, 'Estimate deduplication comparisons and wall time')
    p.add_argument('--n', type=int, required=True, help='Number of records')
    p.add_argument('--avg', type=float, required=True, help='Average class size')
    p.add_argument('--ms-per-cmp', type=float, default=1.0, help='Milliseconds per comparison')

    gen_defaults = GenSpec()
    p = add('generate', do_generate, 'Generate a synthetic corpus with planted duplicates')
    p.add_argument('--out', metavar='DIR', required=True, help='Corpus directory to write')
    p.add_argument('--subjects', type=int, default=gen_defaults.subjects, help='Number of subjects')
    _generator_arguments(p, gen_defaults)
    p.add_argument('--ground-truth', metavar='FILE', default=None,
                   help=f'Ground truth file, defaults to {GROUND_TRUTH_FILE} in the corpus directory')

    p = add('bench', do_bench, 'Measure scaling over synthetic corpora', parents=(params, jobs))
    p.add_argument('--sizes', type=_sizes, required=True, help='Comma-separated ascending corpus sizes')
    p.add_argument('--reps', type=int, default=None,
                   help=f"Repetitions per timing (default: {DEFAULTS['repetitions']})")
    p.add_argument('--queries', type=int, default=None,
                   help=f"Identification queries per size (default: {DEFAULTS['queries']})")
    _generator_arguments(p, gen_defaults)
    p.add_argument('--csv', action='store_true', help='Write CSV')

    p = add('config', do_config, 'Print the effective configuration as YAML')
    p.add_argument('--export', metavar='FILE', default=None, help='Write the configuration to FILE')

    return parser


def _settings_from_args(args):
    config_file = args.config if args.config is not None else config_file_from_environment()
    settings = Settings(config_file)
    settings.update(
        grid_n=getattr(args, 'grid_n', None),
        min_edge=getattr(args, 'min_edge', None),
        max_edge=getattr(args, 'max_edge', None),
        neighbors_k=getattr(args, 'neighbors_k', None),
        score_threshold=getattr(args, 'score_threshold', None),
        min_matched_descriptors=getattr(args, 'min_matched_descriptors', None),
        side_tolerance=getattr(args, 'side_tolerance', None),
        angle_tolerance=getattr(args, 'angle_tolerance', None),
        jobs=getattr(args, 'jobs', None))
    return settings


def run(argv=None):
    """Run the command line, return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    setup_logging(verbose=args.verbose, debug=args.debug, quiet=args.quiet, log=args.log)
    logger.debug("Parsed CLI options {}".format(args))

    try:
        settings = _settings_from_args(args)
        _log_nested(logger.debug, settings.as_dict())
        return args.func(args, settings)
    except OracleCapExceededError as exc:
        logger.error(str(exc))
        return EXIT_CAP_EXCEEDED
    except (ValueError, KeyError, OSError) as exc:
        if args.debug:
            logger.exception(exc)
        else:
            logger.error(str(exc))
        return EXIT_DATA_ERROR


def main():
    sys.exit(run())
