"""
Synthetic workload: random-walk streams with embedded pattern copies.

s_i = R + sum_{j<=i} (mu_j - 0.5), mu_j uniform in [0, 1]. Pattern copies
are embedded at Bernoulli-drawn start timestamps, rejecting overlaps, and
thresholds come from eps_k = |P_k|^(1/p) * threshold_ratio * range(P_k).
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from config import Config
from core import EmbeddingSaturatedError, LpOrder, Pattern, UsageError, validate_pattern, value_range

logger = logging.getLogger(__name__)

# seed-sequence spawn keys, one per independent draw
_WALK, _EMBED, _PATTERN = 0, 1, 2


def make_rng(seed: int, purpose: int = _WALK) -> np.random.Generator:
    if purpose == _WALK:
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(purpose,))))


@dataclass
class EmbedLog:
    starts: list = field(default_factory=list)


@dataclass
class GenConfig:
    length: int
    seed: int
    pattern: Pattern
    R: float = 0.0
    occurrence_probability: float = Config.OCCURRENCE_PROBABILITY
    threshold_ratio: float = Config.THRESHOLD_RATIO
    p: LpOrder = LpOrder(2)
    noise: float = 0.0

    def __post_init__(self):
        if self.length < 1:
            raise UsageError(f"stream length must be >= 1, got {self.length}")
        if not 0.0 <= self.occurrence_probability <= 1.0:
            raise UsageError(f"occurrence probability must be in [0, 1], got {self.occurrence_probability}")
        if self.noise < 0:
            raise UsageError(f"noise must be >= 0, got {self.noise}")
        self.p = LpOrder.parse(self.p)
        if self.occurrence_probability * self.pattern.n > 0.5:
            _warn(f"occurrence probability {self.occurrence_probability} x n={self.pattern.n} "
                  f"> 0.5: embeddings will crowd the stream")


@dataclass
class GeneratedData:
    stream: np.ndarray
    log: EmbedLog
    pattern: Pattern
    meta: dict


def _warn(message):
    logger.warning(message)
    warnings.warn(message, stacklevel=3)


def random_walk(length: int, seed: int, R: float = 0.0) -> np.ndarray:
    if length < 1:
        raise UsageError(f"stream length must be >= 1, got {length}")
    mu = make_rng(seed).random(length)
    return R + np.cumsum(mu - 0.5)


def embed(stream, pattern_values, occurrence_probability: float, seed: int, noise: float = 0.0):
    """Overwrite the stream with pattern copies at non-overlapping random sites.

    Each timestamp is drawn as an embedding start with the given probability;
    draws overlapping an accepted copy are rejected. Returns (stream', EmbedLog)
    with 1-based starts.
    """
    stream = np.array(stream, dtype=np.float64, copy=True)
    values = np.asarray(pattern_values, dtype=np.float64)
    n, length = len(values), len(stream)
    if n == 0 or n > length:
        raise UsageError(f"pattern of length {n} does not fit a stream of length {length}")
    if not 0.0 <= occurrence_probability <= 1.0:
        raise UsageError(f"occurrence probability must be in [0, 1], got {occurrence_probability}")
    if occurrence_probability == 0.0:
        return stream, EmbedLog()

    rng = make_rng(seed, _EMBED)
    draws = np.flatnonzero(rng.random(length - n + 1) < occurrence_probability)
    accepted = []
    next_free = 0
    for start in draws.tolist():
        if start >= next_free:
            accepted.append(start)
            next_free = start + n
    rejected = len(draws) - len(accepted)
    if rejected * 2 > len(draws):
        raise EmbeddingSaturatedError(
            f"{rejected} of {len(draws)} embedding sites overlap at probability "
            f"{occurrence_probability} with n={n}; lower the probability")

    for start in accepted:
        copy = values
        if noise:
            copy = values + rng.uniform(-noise, noise, n)
        stream[start:start + n] = copy
    logger.debug("embedded %d copies (%d overlapping draws rejected)", len(accepted), rejected)
    return stream, EmbedLog([s + 1 for s in accepted])


def derive_thresholds(values, boundaries, threshold_ratio: float, p) -> tuple:
    """eps_k = |P_k|^(1/p) * threshold_ratio * value_range(P_k); |P_k|^(1/inf) = 1"""
    p = LpOrder.parse(p)
    if not threshold_ratio > 0:
        raise UsageError(f"threshold ratio must be > 0, got {threshold_ratio}")
    values = np.asarray(values, dtype=np.float64)
    thresholds = []
    start = 0
    for k, length in enumerate(boundaries, start=1):
        segment = values[start:start + length]
        start += length
        spread = value_range(segment)
        if spread == 0:
            _warn(f"subpattern k={k} is constant; its threshold is 0")
        scale = 1.0 if p.is_infinite else length ** (1.0 / p.order)
        thresholds.append(scale * threshold_ratio * spread)
    return tuple(thresholds)


def random_pattern(length: int, subpatterns: int, seed: int, scale: float = 3.0,
                   name: str = 'synthetic') -> Pattern:
    """Random-walk pattern spanning about [-scale, scale], cut at random points.

    Thresholds are zero; derive them with derive_thresholds().
    """
    if length < 1 or not 1 <= subpatterns <= length:
        raise UsageError(f"need 1 <= subpatterns ({subpatterns}) <= length ({length})")
    rng = make_rng(seed, _PATTERN)
    walk = np.cumsum(rng.random(length) - 0.5)
    spread = walk.max() - walk.min()
    if spread > 0:
        walk = (walk - walk.min()) / spread * (2 * scale) - scale
    cuts = np.sort(rng.choice(np.arange(1, length), size=subpatterns - 1, replace=False))
    boundaries = np.diff(np.concatenate(([0], cuts, [length])))
    return Pattern(walk, boundaries.tolist(), [0.0] * subpatterns, name=name)


def generate(config: GenConfig) -> GeneratedData:
    """Random walk, embedded copies and derived thresholds for one configuration"""
    pattern = config.pattern
    thresholds = derive_thresholds(pattern.values, pattern.boundaries, config.threshold_ratio, config.p)
    pattern = validate_pattern(pattern.with_thresholds(thresholds))
    stream = random_walk(config.length, config.seed, config.R)
    stream, log = embed(stream, pattern.values, config.occurrence_probability, config.seed, config.noise)
    meta = {
        'generator': Config.GENERATOR,
        'seed': config.seed,
        'length': config.length,
        'R': config.R,
        'probability': config.occurrence_probability,
        'threshold_ratio': config.threshold_ratio,
        'p': str(config.p),
        'noise': config.noise,
        'pattern': pattern.name,
        'n': pattern.n,
        'boundaries': list(pattern.boundaries),
        'thresholds': list(thresholds),
        'embedded': len(log.starts),
    }
    logger.info("generated %d elements, %d embedded copies (seed=%d)", config.length, len(log.starts), config.seed)
    return GeneratedData(stream, log, pattern, meta)
