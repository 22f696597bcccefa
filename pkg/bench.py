"""
Benchmark sweeps comparing SS, ELB-ELE and ELB-SEQ.

Methodology:
- streams are generated and converted before timing starts (data loading is
  excluded);
- every cell runs one warm-up repetition, then `reps` timed repetitions, and
  reports the median;
- pruning time is the median of pruning-only runs (no exact verification);
- speedup = SS median / algorithm median.
"""
from __future__ import annotations

import logging
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import pandas as pd

from config import Config
from core import ElbError, LpOrder, Pattern, UsageError
from datagen import GenConfig, generate
from envelope import ElbVariant
from matcher import ElbMatcher, MatcherConfig, block_width, pruning_power
from oracle import SequentialScanner

logger = logging.getLogger(__name__)

AXES = {
    'p': [LpOrder(1), LpOrder(2), LpOrder(3), LpOrder(math.inf)],
    'threshold_ratio': [0.05, 0.10, 0.15, 0.20, 0.25, 0.30],
    'probability': [1e-3, 5e-4, 1e-4, 5e-5, 1e-5],
    'block_ratio': [0.01, 0.05, 0.10, 0.20, 0.40],
}

# one block per pattern beyond this ratio
MAX_BLOCK_RATIO = 0.5

ALGORITHMS = ('SS', 'ELB-ELE', 'ELB-SEQ')


@dataclass
class BenchSpec:
    axis: str
    patterns: list
    values: list = None
    length: int = Config.STREAM_LENGTH
    seed: int = Config.SEED
    reps: int = Config.REPS
    R: float = 0.0
    noise: float = 0.0
    p: LpOrder = LpOrder(2)
    threshold_ratio: float = Config.THRESHOLD_RATIO
    probability: float = Config.OCCURRENCE_PROBABILITY
    block_ratio: float = Config.BLOCK_RATIO

    def __post_init__(self):
        if self.axis not in AXES:
            raise UsageError(f"unknown sweep axis {self.axis!r}; choose from {', '.join(AXES)}")
        if not self.patterns:
            raise UsageError("bench needs at least one pattern")
        if self.values is None:
            self.values = list(AXES[self.axis])
        if self.axis == 'p':
            self.values = [LpOrder.parse(v) for v in self.values]
        if self.reps < 1:
            raise UsageError(f"reps must be >= 1, got {self.reps}")
        self.p = LpOrder.parse(self.p)
        ratios = self.values if self.axis == 'block_ratio' else [self.block_ratio]
        for ratio in ratios:
            if not 0 < ratio <= MAX_BLOCK_RATIO:
                raise UsageError(f"block ratio {ratio:.0%} outside (0%, 50%]")

    def cell_params(self, value) -> dict:
        params = {
            'p': self.p,
            'threshold_ratio': self.threshold_ratio,
            'probability': self.probability,
            'block_ratio': self.block_ratio,
        }
        params[self.axis] = value
        return params


@dataclass
class BenchRow:
    pattern: str
    axis: str
    value: str
    algorithm: str
    w: int
    total_ns_per_window: float
    pruning_ns_per_window: float
    pruning_power: float
    speedup: float
    matches: int
    windows_total: int
    windows_pruned: int
    candidates_verified: int
    element_touches_pruning: int
    element_touches_verify: int
    provenance: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        row = asdict(self)
        row.update(row.pop('provenance'))
        return row


def _timed(fn, reps):
    """Warm-up once, then median wall time of `reps` runs and the last result"""
    fn()
    times = []
    result = None
    for _ in range(reps):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times), result


def _scan(pattern, p, values):
    scanner = SequentialScanner(pattern, p)
    scanner.extend(values)
    return scanner.report()


def _elb(config, values, verify=True):
    matcher = ElbMatcher(config, verify=verify)
    matcher.extend(values)
    return matcher.report()


def _per_window(seconds, windows):
    return seconds * 1e9 / windows if windows else math.nan


def run_cell(spec: BenchSpec, pattern: Pattern, value) -> list:
    """All algorithms for one (pattern, axis value) cell"""
    params = spec.cell_params(value)
    p = params['p']
    data = generate(GenConfig(
        length=spec.length, seed=spec.seed, pattern=pattern, R=spec.R,
        occurrence_probability=params['probability'],
        threshold_ratio=params['threshold_ratio'], p=p, noise=spec.noise,
    ))
    pattern = data.pattern
    values = data.stream.tolist()
    w = block_width(pattern.n, params['block_ratio'])
    provenance = {
        'seed': spec.seed, 'R': spec.R, 'probability': params['probability'],
        'threshold_ratio': params['threshold_ratio'], 'p': str(p),
        'generator': data.meta['generator'],
    }
    label = str(value)

    ss_time, ss = _timed(lambda: _scan(pattern, p, values), spec.reps)
    rows = [BenchRow(
        pattern.name, spec.axis, label, 'SS', w,
        _per_window(ss_time, ss.windows_total), 0.0, 0.0 if ss.windows_total else math.nan,
        1.0, len(ss.matches), ss.windows_total, 0, ss.windows_total, 0, ss.element_touches,
        provenance,
    )]

    for variant in (ElbVariant.ELE, ElbVariant.SEQ):
        config = MatcherConfig(pattern, p, variant, w)
        total, report = _timed(lambda: _elb(config, values), spec.reps)
        prune, _ = _timed(lambda: _elb(config, values, verify=False), spec.reps)
        if report.matches != ss.matches:
            raise ElbError(f"ELB-{variant.name} disagrees with SS on {pattern.name} at {spec.axis}={label}")
        stats = report.stats
        power = pruning_power(report)
        rows.append(BenchRow(
            pattern.name, spec.axis, label, f"ELB-{variant.name}", w,
            _per_window(total, stats.windows_total), _per_window(prune, stats.windows_total),
            math.nan if power is None else power,
            ss_time / total if total > 0 else math.inf,
            len(report.matches), stats.windows_total, stats.windows_pruned,
            stats.candidates_verified, stats.element_touches_pruning, stats.element_touches_verify,
            provenance,
        ))
    logger.info("cell %s %s=%s done: %d matches, SS %.0f ns/window",
                pattern.name, spec.axis, label, len(ss.matches), rows[0].total_ns_per_window)
    return rows


def _run_cell_args(args):
    return run_cell(*args)


def run_bench(spec: BenchSpec, threads: int = None) -> pd.DataFrame:
    """Every (pattern, value) cell; cells may run in parallel processes"""
    threads = Config.threads() if threads is None else threads
    cells = [(spec, pattern, value) for pattern in spec.patterns for value in spec.values]
    logger.info("bench over %s: %d cells, %d reps, %d worker(s)", spec.axis, len(cells), spec.reps, threads)
    if threads > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(cells))) as pool:
            results = list(pool.map(_run_cell_args, cells))
    else:
        results = [run_cell(*cell) for cell in cells]
    rows = [row.as_dict() for cell_rows in results for row in cell_rows]
    return pd.DataFrame(rows)


def summary_table(frame: pd.DataFrame) -> str:
    columns = ['pattern', 'value', 'algorithm', 'w', 'total_ns_per_window',
               'pruning_ns_per_window', 'pruning_power', 'speedup', 'matches']
    view = frame[columns].copy()
    view['pruning_power'] = (view['pruning_power'] * 100).round(2)
    return view.to_string(index=False, float_format=lambda v: f"{v:.2f}")
