"""
Command-line front end
Subcommands: gen, match, bench, envelope
Exit codes: 0 success, 1 runtime/data error, 2 usage error
"""
import argparse
import logging
import os
import sys

from config import Config
from core import DataError, ElbError, LpOrder, UsageError
from datagen import GenConfig, derive_thresholds, generate, random_pattern
from envelope import ElbVariant, block_bounds, build_envelope
from matcher import MatcherConfig, block_width, process_stream, pruning_power
from oracle import sequential_scan
from bench import AXES, MAX_BLOCK_RATIO, BenchSpec, run_bench, summary_table
from utils import (
    iter_stream, read_pattern, write_block_bounds, write_embed_log, write_envelope,
    write_matches, write_sidecar, write_stats, write_stream,
)

logger = logging.getLogger('elb')

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


def print_header(text):
    print("\n" + "=" * 60)
    print(f"  {text}")
    print("=" * 60)


def _percent(text):
    """Percent flag value -> fraction"""
    try:
        return float(text) / 100.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid percentage {text!r}") from None


def _norm_order(text):
    try:
        return LpOrder.parse(text)
    except UsageError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _resolve_width(args, n):
    if args.block_width is not None:
        return args.block_width
    ratio = Config.BLOCK_RATIO if args.block_ratio is None else args.block_ratio
    if not 0 < ratio <= MAX_BLOCK_RATIO:
        raise UsageError(f"--block-ratio {ratio * 100:g} outside (0, 50]")
    return block_width(n, ratio)


def _load_pattern(args):
    pattern = read_pattern(args.pattern_file)
    if getattr(args, 'threshold_ratio', None) is not None:
        thresholds = derive_thresholds(pattern.values, pattern.boundaries, args.threshold_ratio, args.p)
        pattern = pattern.with_thresholds(thresholds)
    return pattern


# ==================== COMMANDS ====================

def cmd_gen(args):
    """Write stream.txt, embed_log.csv and meta.json into --out"""
    pattern = read_pattern(args.pattern_file, validate=False)
    data = generate(GenConfig(
        length=args.length, seed=args.seed, pattern=pattern, R=args.R,
        occurrence_probability=args.probability,
        threshold_ratio=args.threshold_ratio, p=args.p, noise=args.noise,
    ))
    out = args.out or Config.OUTPUT_DIR
    Config.init_dirs(out)
    write_stream(os.path.join(out, 'stream.txt'), data.stream)
    write_embed_log(os.path.join(out, 'embed_log.csv'), data.log.starts)
    write_sidecar(os.path.join(out, 'meta.json'), data.meta)
    logger.info("Wrote stream, embed log and sidecar to %s", out)
    return EXIT_OK


def cmd_match(args):
    """Match a stream file; write match and stats CSVs"""
    pattern = _load_pattern(args)
    stream = iter_stream(args.stream_file)
    if args.algo == 'ss':
        oracle = sequential_scan(pattern, stream, args.p)
        matches = oracle.matches
        stats = {
            'windows_total': oracle.windows_total,
            'windows_pruned': 0,
            'candidates_verified': oracle.windows_total,
            'block_checks': 0,
            'element_touches_pruning': 0,
            'element_touches_verify': oracle.element_touches,
        }
        power = 0.0 if oracle.windows_total else None
    else:
        config = MatcherConfig(pattern, args.p, ElbVariant.parse(args.algo), _resolve_width(args, pattern.n))
        report = process_stream(config, stream)
        matches = report.matches
        stats = report.stats.as_dict()
        power = pruning_power(report)

    out = Config.OUTPUT_DIR
    matches_out = args.matches_out or os.path.join(out, 'matches.csv')
    stats_out = args.stats_out or os.path.join(out, 'stats.csv')
    write_matches(matches_out, matches)
    write_stats(stats_out, stats, power)

    print_header(f"{args.algo.upper()} on {os.path.basename(args.stream_file)}")
    print(f"  windows:       {stats['windows_total']}")
    print(f"  pruned:        {stats['windows_pruned']}")
    print(f"  pruning power: {'n/a' if power is None else f'{power:.2%}'}")
    print(f"  matches:       {len(matches)}  -> {matches_out}")
    return EXIT_OK


def cmd_bench(args):
    """Sweep one axis and write the bench CSV"""
    if args.pattern_file:
        patterns = [read_pattern(path, validate=False) for path in args.pattern_file]
    else:
        patterns = [random_pattern(args.pattern_length, args.subpatterns, args.seed)]

    values = None
    if args.values:
        parse = {
            'p': LpOrder.parse,
            'threshold_ratio': lambda v: float(v) / 100.0,
            'block_ratio': lambda v: float(v) / 100.0,
            'probability': float,
        }[args.axis]
        try:
            values = [parse(v) for v in args.values.split(',') if v.strip()]
        except ValueError:
            raise UsageError(f"invalid --values {args.values!r}") from None

    spec = BenchSpec(
        axis=args.axis, patterns=patterns, values=values, length=args.length,
        seed=args.seed, reps=args.reps, R=args.R, noise=args.noise, p=args.p,
        threshold_ratio=args.threshold_ratio, probability=args.probability,
        block_ratio=Config.BLOCK_RATIO if args.block_ratio is None else args.block_ratio,
    )
    frame = run_bench(spec)
    out = args.out or os.path.join(Config.OUTPUT_DIR, f"bench_{args.axis}.csv")
    Config.init_dirs(os.path.dirname(out))
    frame.to_csv(out, index=False, lineterminator='\n')

    print_header(f"Bench over {args.axis} ({spec.reps} reps, stream length {spec.length})")
    print(summary_table(frame))
    print(f"\n  -> {out}")
    return EXIT_OK


def cmd_envelope(args):
    """Dump envelope and block bounds CSVs for plotting"""
    pattern = _load_pattern(args)
    w = _resolve_width(args, pattern.n)
    envelope = build_envelope(pattern, args.variant, w, args.p)
    bounds = block_bounds(envelope, w, pattern.n)
    out = args.out or Config.OUTPUT_DIR
    write_envelope(os.path.join(out, 'envelope.csv'), envelope)
    write_block_bounds(os.path.join(out, 'blocks.csv'), bounds)
    return EXIT_OK


# ==================== PARSER ====================

def _add_width(parser):
    parser.add_argument('--block-ratio', type=_percent, default=None,
                        help='block width as a percentage of the pattern length (default 5)')
    parser.add_argument('--block-width', type=int, default=None, help='explicit block width w')


def build_parser():
    parser = argparse.ArgumentParser(prog='elb', description='Consecutive-subpattern stream matching with ELB pruning')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help='generate a synthetic stream')
    gen.add_argument('--pattern-file', required=True)
    gen.add_argument('--length', type=int, default=Config.STREAM_LENGTH)
    gen.add_argument('--seed', type=int, default=Config.SEED)
    gen.add_argument('--probability', type=float, default=Config.OCCURRENCE_PROBABILITY)
    gen.add_argument('--threshold-ratio', type=_percent, default=Config.THRESHOLD_RATIO,
                     help='percentage (default 20)')
    gen.add_argument('--p', type=_norm_order, default=LpOrder(2))
    gen.add_argument('--R', type=float, default=0.0, help='random walk base value')
    gen.add_argument('--noise', type=float, default=0.0, help='bounded uniform noise on embedded copies')
    gen.add_argument('--out', default=None, help='output directory')
    gen.set_defaults(func=cmd_gen)

    match = sub.add_parser('match', help='match a stream file')
    match.add_argument('--pattern-file', required=True)
    match.add_argument('--stream-file', required=True)
    match.add_argument('--algo', choices=['ss', 'elb-ele', 'elb-seq'], default='elb-seq')
    match.add_argument('--p', type=_norm_order, default=LpOrder(2))
    match.add_argument('--threshold-ratio', type=_percent, default=None,
                       help='derive thresholds (percentage) instead of using the file')
    _add_width(match)
    match.add_argument('--matches-out', default=None)
    match.add_argument('--stats-out', default=None)
    match.set_defaults(func=cmd_match)

    bench = sub.add_parser('bench', help='benchmark sweep')
    bench.add_argument('--axis', choices=list(AXES), default='p')
    bench.add_argument('--values', default=None,
                       help='comma-separated axis values (ratios in percent)')
    bench.add_argument('--pattern-file', action='append', default=[])
    bench.add_argument('--pattern-length', type=int, default=100)
    bench.add_argument('--subpatterns', type=int, default=4)
    bench.add_argument('--length', type=int, default=Config.STREAM_LENGTH)
    bench.add_argument('--seed', type=int, default=Config.SEED)
    bench.add_argument('--reps', type=int, default=Config.REPS)
    bench.add_argument('--p', type=_norm_order, default=LpOrder(2))
    bench.add_argument('--threshold-ratio', type=_percent, default=Config.THRESHOLD_RATIO)
    bench.add_argument('--probability', type=float, default=Config.OCCURRENCE_PROBABILITY)
    bench.add_argument('--block-ratio', type=_percent, default=None)
    bench.add_argument('--R', type=float, default=0.0)
    bench.add_argument('--noise', type=float, default=0.0)
    bench.add_argument('--out', default=None, help='bench CSV path')
    bench.set_defaults(func=cmd_bench)

    env = sub.add_parser('envelope', help='dump an envelope to CSV')
    env.add_argument('--pattern-file', required=True)
    env.add_argument('--variant', choices=['ele', 'seq'], default='seq')
    env.add_argument('--p', type=_norm_order, default=LpOrder(2))
    env.add_argument('--threshold-ratio', type=_percent, default=None)
    _add_width(env)
    env.add_argument('--out', default=None, help='output directory')
    env.set_defaults(func=cmd_envelope)
    return parser


def configure_logging(verbose=False):
    level = logging.DEBUG if verbose else getattr(logging, str(Config.LOG_LEVEL).upper(), logging.INFO)
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.func(args)
    except UsageError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except (DataError, ElbError, OSError) as e:
        logger.error("%s", e)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
