"""
Streaming ELB matcher.

The stream is cut into disjoint w-wide blocks from its first element. Group
anchors sit at timestamps 1, 1+w, 1+2w, ...; the N blocks of an anchor's
window are exactly the N most recently completed stream blocks, so every
block feature is computed once and reused by N consecutive anchors. A group
of w windows is either pruned as a whole or each of its windows is verified
exactly.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from config import Config
from core import DataError, LpOrder, Pattern, UsageError, validate_pattern, verify_window
from envelope import BlockBounds, ElbVariant, block_bounds, build_envelope

logger = logging.getLogger(__name__)


def block_width(n: int, block_ratio: float) -> int:
    """w = max(1, floor(ratio * n))"""
    if not 0 < block_ratio <= 1:
        raise UsageError(f"block ratio must be in (0, 1], got {block_ratio}")
    return max(1, int(math.floor(block_ratio * n)))


@dataclass(frozen=True)
class MatcherConfig:
    pattern: Pattern
    p: LpOrder
    variant: ElbVariant
    w: int

    def __post_init__(self):
        validate_pattern(self.pattern)
        object.__setattr__(self, 'p', LpOrder.parse(self.p))
        object.__setattr__(self, 'variant', ElbVariant.parse(self.variant))
        n = self.pattern.n
        if isinstance(self.w, bool) or int(self.w) != self.w:
            raise UsageError(f"block width must be an integer, got {self.w!r}")
        object.__setattr__(self, 'w', int(self.w))
        if not 1 <= self.w <= n:
            raise UsageError(f"block width w={self.w} outside [1, n={n}]")

    @classmethod
    def from_ratio(cls, pattern, p, variant, block_ratio=None):
        ratio = Config.BLOCK_RATIO if block_ratio is None else block_ratio
        return cls(pattern, p, variant, block_width(pattern.n, ratio))

    @property
    def N(self) -> int:
        return self.pattern.n // self.w


@dataclass
class MatchStats:
    windows_total: int = 0
    windows_pruned: int = 0
    candidates_verified: int = 0
    block_checks: int = 0
    element_touches_pruning: int = 0
    element_touches_verify: int = 0

    def as_dict(self) -> dict:
        return {
            'windows_total': self.windows_total,
            'windows_pruned': self.windows_pruned,
            'candidates_verified': self.candidates_verified,
            'block_checks': self.block_checks,
            'element_touches_pruning': self.element_touches_pruning,
            'element_touches_verify': self.element_touches_verify,
        }


@dataclass
class MatchReport:
    matches: list = field(default_factory=list)
    stats: MatchStats = field(default_factory=MatchStats)
    verified: bool = True


def pruning_power(report: MatchReport):
    """windows_pruned / windows_total, or None when no window exists"""
    stats = report.stats
    if stats.windows_total == 0:
        return None
    return stats.windows_pruned / stats.windows_total


# ==================== FEATURES ====================

def _check_block(block_values, w):
    if w is not None and len(block_values) != w:
        raise UsageError(f"expected {w} block values, got {len(block_values)}")
    if len(block_values) == 0:
        raise UsageError("empty block")


def feature_ele(block_values, w=None) -> float:
    """Last element of a window block"""
    _check_block(block_values, w)
    return float(block_values[-1])


def feature_seq(block_values, w=None) -> float:
    """Mean of a window block, summed left to right"""
    _check_block(block_values, w)
    total = 0.0
    for value in block_values:
        total += float(value)
    return total / len(block_values)


def prune_group(features, bounds: BlockBounds):
    """First active block whose feature is outside its bounds, or None on pass"""
    upper, lower = bounds.upper, bounds.lower
    for j in range(bounds.active_from, bounds.N + 1):
        f = features[j - 1]
        if f > upper[j - 1] or f < lower[j - 1]:
            return j
    return None


class FeatureQueue:
    """Ring of the N most recent block features.

    Block features are accumulated one element at a time; ELE keeps the
    block's last element, SEQ its mean. touches counts the elements read.
    """

    def __init__(self, N: int, w: int, variant: ElbVariant):
        self.N = N
        self.w = w
        self.seq = variant is ElbVariant.SEQ
        self.ring = [0.0] * N
        self.head = 0
        self.size = 0
        self.touches = 0
        self._acc = 0.0
        self._fill = 0

    def add(self, value: float) -> bool:
        """Feed one element; True when it completes a block"""
        self._fill += 1
        if self.seq:
            self._acc += value
            self.touches += 1
        if self._fill < self.w:
            return False
        if self.seq:
            feature = self._acc / self.w
        else:
            feature = value
            self.touches += 1
        self._acc = 0.0
        self._fill = 0
        if self.size < self.N:
            self.ring[(self.head + self.size) % self.N] = feature
            self.size += 1
        else:
            self.ring[self.head] = feature
            self.head = (self.head + 1) % self.N
        return True

    def __len__(self):
        return self.size

    def __getitem__(self, j: int) -> float:
        """Feature of 0-based block j, oldest first"""
        if not 0 <= j < self.size:
            raise IndexError(j)
        return self.ring[(self.head + j) % self.N]

    def features(self) -> list:
        return [self[j] for j in range(self.size)]


class WindowBuffer:
    """Mirrored ring of the last n elements; any window is a contiguous view"""

    def __init__(self, n: int):
        self.n = n
        self.data = np.zeros(2 * n, dtype=np.float64)
        self.count = 0

    def append(self, value: float):
        pos = self.count % self.n
        self.data[pos] = value
        self.data[pos + self.n] = value
        self.count += 1

    def window(self, start: int) -> np.ndarray:
        """Elements start .. start+n-1 (0-based); start must be count - n"""
        pos = start % self.n
        return self.data[pos:pos + self.n]


# ==================== ENGINE ====================

class ElbMatcher:
    """One stream, one pattern; feed elements with push()/extend()"""

    def __init__(self, config: MatcherConfig, verify: bool = True, slack: float | None = None):
        self.config = config
        self.verify = verify
        pattern = config.pattern
        envelope = build_envelope(pattern, config.variant, config.w, config.p)
        self.bounds = block_bounds(envelope, config.w, pattern.n,
                                   slack=Config.ROUNDING_SLACK if slack is None else slack)
        self._upper = self.bounds.upper.tolist()
        self._lower = self.bounds.lower.tolist()
        self._queue = FeatureQueue(self.bounds.N, config.w, config.variant)
        self._buffer = WindowBuffer(pattern.n)
        self._group_pass = False
        self._matches = []
        self._stats = MatchStats()

    @property
    def timestamp(self) -> int:
        """Number of elements consumed so far"""
        return self._buffer.count

    def push(self, value):
        self.extend((value,))

    def extend(self, values):
        if isinstance(values, np.ndarray):
            values = values.tolist()
        cfg = self.config
        pattern, p, w = cfg.pattern, cfg.p, cfg.w
        n, N = pattern.n, self.bounds.N
        first = self.bounds.active_from - 1
        upper, lower = self._upper, self._lower
        queue, buffer, stats = self._queue, self._buffer, self._stats
        ring = queue.ring
        debug = logger.isEnabledFor(logging.DEBUG)
        try:
            for value in values:
                t = buffer.count + 1
                try:
                    value = float(value)
                except (TypeError, ValueError):
                    raise DataError(f"non-numeric stream value at t={t}: {value!r}") from None
                if not math.isfinite(value):
                    raise DataError(f"non-finite stream value at t={t}: {value}")
                buffer.append(value)
                queue.add(value)
                start = t - n
                if start < 0:
                    continue
                if start % w == 0:
                    failing = None
                    head = queue.head
                    for j in range(first, N):
                        stats.block_checks += 1
                        f = ring[(head + j) % N]
                        if f > upper[j] or f < lower[j]:
                            failing = j + 1
                            break
                    self._group_pass = failing is None
                    if debug and failing is not None:
                        logger.debug("group at t=%d pruned by block %d", start + 1, failing)
                stats.windows_total += 1
                if not self._group_pass:
                    stats.windows_pruned += 1
                    continue
                stats.candidates_verified += 1
                if self.verify:
                    matched, touched = verify_window(pattern, buffer.window(start), p)
                    stats.element_touches_verify += touched
                    if matched:
                        self._matches.append(start + 1)
        finally:
            stats.element_touches_pruning = queue.touches

    def report(self) -> MatchReport:
        stats = MatchStats(**self._stats.as_dict())
        return MatchReport(list(self._matches), stats, verified=self.verify)


def process_stream(config: MatcherConfig, stream, verify: bool = True) -> MatchReport:
    """Match a whole stream; result equals a sequential scan's"""
    matcher = ElbMatcher(config, verify=verify)
    matcher.extend(stream)
    report = matcher.report()
    power = pruning_power(report)
    logger.info(
        "elb-%s p=%s w=%d N=%d: %d windows, %d pruned (%s), %d verified, %d matches",
        config.variant.value, config.p, config.w, config.N,
        report.stats.windows_total, report.stats.windows_pruned,
        'n/a' if power is None else f"{power:.2%}",
        report.stats.candidates_verified, len(report.matches),
    )
    return report
