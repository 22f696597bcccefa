"""
Pattern envelopes and per-block bounds for the two Equal-Length Block variants.

ELE: element-wise envelope U_i = p_i + eps_k(i), L_i = p_i - eps_k(i); the
window-block feature is the block's last element.

SEQ: mean-based envelope over the w-length pattern segment ending at i,
U_i = mean(P[i-w+1:i]) + theta(i), L_i = mean(P[i-w+1:i]) - theta(i), defined
for i >= w; the window-block feature is the block mean.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from core import LpOrder, Pattern, UsageError


class ElbVariant(enum.Enum):
    ELE = 'ele'
    SEQ = 'seq'

    @classmethod
    def parse(cls, text) -> ElbVariant:
        if isinstance(text, ElbVariant):
            return text
        value = str(text).strip().lower()
        if value.startswith('elb-'):
            value = value[4:]
        try:
            return cls(value)
        except ValueError:
            raise UsageError(f"unknown ELB variant {text!r}") from None


@dataclass(frozen=True, eq=False)
class Envelope:
    """Upper/lower lines; entries before valid_from (1-based) are NaN"""

    upper: np.ndarray
    lower: np.ndarray
    valid_from: int
    variant: ElbVariant
    w: int | None = None
    # rounding scale of the bound at each index (SEQ only)
    scale: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.upper)

    def rows(self):
        """(index, upper, lower) for every valid 1-based index"""
        for i in range(self.valid_from, self.n + 1):
            yield i, float(self.upper[i - 1]), float(self.lower[i - 1])


@dataclass(frozen=True, eq=False)
class BlockBounds:
    """Per-block bounds; inactive blocks hold (-inf, +inf)"""

    upper: np.ndarray
    lower: np.ndarray
    w: int
    N: int
    variant: ElbVariant
    active_from: int

    def is_active(self, j: int) -> bool:
        return j >= self.active_from


class PrefixMeans:
    """O(1) mean of any pattern segment via prefix sums"""

    def __init__(self, values):
        values = np.asarray(values, dtype=np.float64)
        self.prefix = np.concatenate(([0.0], np.cumsum(values)))
        # running sum of |values|: bounds the rounding in any prefix difference
        self.magnitude = np.concatenate(([0.0], np.cumsum(np.abs(values))))

    def mean(self, lo: int, hi: int) -> float:
        """Mean of 1-based inclusive segment [lo, hi]"""
        return (self.prefix[hi] - self.prefix[lo - 1]) / (hi - lo + 1)

    def window_means(self, w: int) -> np.ndarray:
        """Means of every w-length segment, indexed by its 1-based end i in [w, n]"""
        return (self.prefix[w:] - self.prefix[:-w]) / w

    def window_scale(self, w: int) -> np.ndarray:
        """Error scale of window_means(w): sum of |values| up to i, over w"""
        return self.magnitude[w:] / w


def _readonly(*arrays):
    for arr in arrays:
        arr.setflags(write=False)


def _check_width(w, n):
    if not isinstance(w, (int, np.integer)) or isinstance(w, bool):
        raise UsageError(f"block width must be an integer, got {w!r}")
    if w < 1 or w > n:
        raise UsageError(f"block width w={w} outside [1, n={n}]")


def build_envelope_ele(pattern: Pattern) -> Envelope:
    """Element-wise envelope; independent of p"""
    eps = np.asarray(pattern.thresholds, dtype=np.float64)[pattern.index.pos_to_subpattern]
    upper = pattern.values + eps
    lower = pattern.values - eps
    _readonly(upper, lower)
    return Envelope(upper, lower, valid_from=1, variant=ElbVariant.ELE)


def _theta_all(pattern: Pattern, w: int, p: LpOrder) -> np.ndarray:
    """theta_seq(i) for every 1-based i in [w, n], as an array of n - w + 1 values"""
    idx = pattern.index
    eps = np.asarray(pattern.thresholds, dtype=np.float64)
    if p.is_infinite:
        # elementwise mean bound
        per_element = eps[idx.pos_to_subpattern]
        return PrefixMeans(per_element).window_means(w)
    # sum of eps_k^p over the subpatterns overlapping P[i-w+1:i]
    powered = eps ** p.order
    first = idx.pos_to_subpattern[:pattern.n - w + 1]
    last = idx.pos_to_subpattern[w - 1:]
    total = np.array([powered[k_l:k_r + 1].sum() for k_l, k_r in zip(first, last)])
    return (total / w) ** (1.0 / p.order)


def theta_seq(pattern: Pattern, i: int, w: int, p) -> float:
    """Slack of the mean-based envelope at 1-based position i"""
    p = LpOrder.parse(p)
    _check_width(w, pattern.n)
    if i < w or i > pattern.n:
        raise UsageError(f"theta_seq needs w <= i <= n, got i={i}, w={w}, n={pattern.n}")
    k_l = pattern.index.pos_to_subpattern[i - w]
    k_r = pattern.index.pos_to_subpattern[i - 1]
    eps = pattern.thresholds
    if p.is_infinite:
        owners = pattern.index.pos_to_subpattern[i - w:i]
        return sum(eps[k] for k in owners) / w
    return (sum(eps[k] ** p.order for k in range(k_l, k_r + 1)) / w) ** (1.0 / p.order)


def build_envelope_seq(pattern: Pattern, w: int, p) -> Envelope:
    """Mean-based envelope defined on [w, n]"""
    p = LpOrder.parse(p)
    n = pattern.n
    _check_width(w, n)
    prefix = PrefixMeans(pattern.values)
    means = prefix.window_means(w)
    theta = _theta_all(pattern, w, p)
    upper = np.full(n, np.nan)
    lower = np.full(n, np.nan)
    scale = np.full(n, np.nan)
    upper[w - 1:] = means + theta
    lower[w - 1:] = means - theta
    eps = np.asarray(pattern.thresholds, dtype=np.float64)[pattern.index.pos_to_subpattern]
    scale[w - 1:] = prefix.window_scale(w) + PrefixMeans(eps).window_scale(w)
    _readonly(upper, lower, scale)
    return Envelope(upper, lower, valid_from=w, variant=ElbVariant.SEQ, w=w, scale=scale)


def build_envelope(pattern: Pattern, variant, w: int, p) -> Envelope:
    variant = ElbVariant.parse(variant)
    if variant is ElbVariant.ELE:
        return build_envelope_ele(pattern)
    return build_envelope_seq(pattern, w, p)


def block_bounds(envelope: Envelope, w: int, n: int, slack: float = 0.0) -> BlockBounds:
    """Max of U and min of L over each block's index window.

    Block j covers 1-based indices (j-1)w+1 .. jw; the trailing n mod w
    indices belong to no block. slack widens every active bound by
    slack * (1 + |bound| + m), where m is the largest envelope scale
    behind the block (SEQ) and 0 for ELE.
    """
    if envelope.n != n:
        raise UsageError(f"envelope length {envelope.n} != n={n}")
    _check_width(w, n)
    if envelope.variant is ElbVariant.SEQ and envelope.w != w:
        raise UsageError(f"envelope built for w={envelope.w}, bounds requested for w={w}")
    N = n // w
    upper = envelope.upper[:N * w].reshape(N, w)
    lower = envelope.lower[:N * w].reshape(N, w)
    if envelope.variant is ElbVariant.SEQ:
        active_from = 2
        hi = np.full(N, math.inf)
        lo = np.full(N, -math.inf)
        if N > 1:
            hi[1:] = upper[1:].max(axis=1)
            lo[1:] = lower[1:].min(axis=1)
    else:
        active_from = 1
        hi = upper.max(axis=1)
        lo = lower.min(axis=1)
    if slack:
        magnitude = np.zeros(N)
        if envelope.scale is not None and N > 1:
            magnitude[1:] = envelope.scale[:N * w].reshape(N, w)[1:].max(axis=1)
        hi = hi + slack * (1.0 + np.abs(hi) + magnitude)
        lo = lo - slack * (1.0 + np.abs(lo) + magnitude)
    _readonly(hi, lo)
    return BlockBounds(hi, lo, w=w, N=N, variant=envelope.variant, active_from=active_from)
