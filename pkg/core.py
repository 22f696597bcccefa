"""
Domain types, L_p distance and exact consecutive-subpattern verification.

Every other module is tested against the semantics defined here: a window
matches a pattern when each aligned sub-window lies within its own L_p
threshold of the corresponding subpattern.

Positions and timestamps are 1-based in every public surface (reports,
files, error messages); arrays are 0-based internally.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np


# ==================== ERRORS ====================

class ElbError(Exception):
    """Base class for matcher errors"""


class UsageError(ElbError, ValueError):
    """Bad arguments or violated preconditions"""


class PatternValidationError(UsageError):
    """Pattern invariants violated; carries every violation found"""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class DataError(ElbError, ValueError):
    """Bad input data"""


class FormatError(DataError):
    """Parse error in an input file"""

    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")


class EmbeddingSaturatedError(DataError):
    """Non-overlapping embedding placement is impossible at the requested rate"""


# ==================== TYPES ====================

@dataclass(frozen=True)
class LpOrder:
    """Norm order p: a finite integer >= 1 or infinity"""

    order: float

    INFINITY = math.inf

    def __post_init__(self):
        order = self.order
        if isinstance(order, str):
            object.__setattr__(self, 'order', LpOrder.parse(order).order)
            return
        if isinstance(order, bool) or not isinstance(order, numbers.Real):
            raise UsageError(f"invalid norm order {order!r}")
        if order == math.inf:
            object.__setattr__(self, 'order', math.inf)
            return
        if not float(order).is_integer() or order < 1:
            raise UsageError(f"norm order must be an integer >= 1 or inf, got {order!r}")
        object.__setattr__(self, 'order', int(order))

    @classmethod
    def parse(cls, text) -> LpOrder:
        if isinstance(text, LpOrder):
            return text
        if isinstance(text, (int, float)):
            return cls(text)
        value = str(text).strip().lower()
        if value in ('inf', 'infinity', '∞', 'max'):
            return cls(math.inf)
        try:
            return cls(int(value))
        except ValueError:
            raise UsageError(f"invalid norm order {text!r}") from None

    @property
    def is_infinite(self) -> bool:
        return self.order == math.inf

    def __str__(self):
        return 'inf' if self.is_infinite else str(self.order)


@dataclass(frozen=True)
class SubpatternIndex:
    """Precomputed alignment of pattern positions to subpatterns (0-based)"""

    pos_to_subpattern: np.ndarray
    starts: np.ndarray
    ends: np.ndarray

    @classmethod
    def from_boundaries(cls, boundaries: Sequence[int]) -> SubpatternIndex:
        lengths = np.asarray(boundaries, dtype=np.int64)
        ends = np.cumsum(lengths)
        starts = ends - lengths
        pos = np.repeat(np.arange(len(lengths)), lengths)
        for arr in (pos, starts, ends):
            arr.setflags(write=False)
        return cls(pos, starts, ends)

    def subpattern_of(self, i: int) -> int:
        """1-based subpattern id of 1-based position i"""
        return int(self.pos_to_subpattern[i - 1]) + 1


def _length(value):
    """Integral lengths become int; anything else is kept for pattern_errors to report"""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise UsageError(f"invalid subpattern length {value!r}") from None
    return int(number) if number.is_integer() else number


@dataclass(frozen=True, eq=False)
class Pattern:
    """Pattern values split into consecutive subpatterns with thresholds.

    Construction only coerces types; call validate_pattern() to enforce the
    invariants.
    """

    values: np.ndarray
    boundaries: tuple
    thresholds: tuple
    name: str = field(default='pattern', compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True).ravel()
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'boundaries', tuple(_length(b) for b in self.boundaries))
        object.__setattr__(self, 'thresholds', tuple(float(e) for e in self.thresholds))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def b(self) -> int:
        return len(self.boundaries)

    @cached_property
    def index(self) -> SubpatternIndex:
        return SubpatternIndex.from_boundaries(self.boundaries)

    def subpattern(self, k: int) -> np.ndarray:
        """Values of 1-based subpattern k"""
        idx = self.index
        return self.values[idx.starts[k - 1]:idx.ends[k - 1]]

    def with_thresholds(self, thresholds) -> Pattern:
        return Pattern(self.values, self.boundaries, thresholds, name=self.name)


@dataclass(frozen=True)
class WindowView:
    """n consecutive stream elements starting at 1-based timestamp start"""

    start: int
    values: np.ndarray


# ==================== OPERATIONS ====================

def _norm(diff: np.ndarray, p: LpOrder) -> float:
    """L_p norm of a vector of absolute differences"""
    if p.is_infinite:
        return float(diff.max())
    if p.order == 1:
        return float(diff.sum())
    if p.order == 2:
        return math.sqrt(float(np.dot(diff, diff)))
    return float(np.power(diff, p.order).sum()) ** (1.0 / p.order)


def lp_distance(x, y, p) -> float:
    """L_p distance between two equal-length finite sequences"""
    p = LpOrder.parse(p)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise UsageError(f"length mismatch: {x.size} vs {y.size}")
    if x.size == 0:
        raise UsageError("sequences must not be empty")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise UsageError("non-finite value in distance input")
    return _norm(np.abs(x - y), p)


def verify_window(pattern: Pattern, values: np.ndarray, p: LpOrder):
    """Check subpatterns left to right with early exit.

    Returns (matched, elements_touched). values must already hold n finite
    elements; callers in the hot path guarantee that.
    """
    idx = pattern.index
    touched = 0
    for k in range(pattern.b):
        start, end = idx.starts[k], idx.ends[k]
        touched += end - start
        diff = np.abs(values[start:end] - pattern.values[start:end])
        if _norm(diff, p) > pattern.thresholds[k]:
            return False, int(touched)
    return True, int(touched)


def exact_match(pattern: Pattern, window, p) -> bool:
    """True iff every subpattern is within its threshold of the aligned sub-window"""
    p = LpOrder.parse(p)
    values = window.values if isinstance(window, WindowView) else window
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (pattern.n,):
        raise UsageError(f"window length {values.size} != pattern length {pattern.n}")
    if not np.isfinite(values).all():
        raise UsageError("non-finite value in window")
    return verify_window(pattern, values, p)[0]


def value_range(segment) -> float:
    """max - min of a non-empty segment"""
    segment = np.asarray(segment, dtype=np.float64)
    if segment.size == 0:
        raise UsageError("value_range of an empty segment")
    return float(segment.max() - segment.min())


def pattern_errors(pattern: Pattern) -> list:
    """Every violated Pattern invariant, with position context"""
    errors = []
    n = pattern.n
    if n == 0:
        errors.append("pattern has no values")
    if pattern.b < 1:
        errors.append("pattern needs at least one subpattern")
    for k, length in enumerate(pattern.boundaries, start=1):
        if not isinstance(length, int):
            errors.append(f"non-integer subpattern length {length!r} at k={k}")
        elif length < 1:
            errors.append(f"subpattern length {length} < 1 at k={k}")
    total = sum(pattern.boundaries)
    if pattern.b and total != n:
        errors.append(f"boundaries sum {total} ≠ n={n}")
    if len(pattern.thresholds) != pattern.b:
        errors.append(f"{len(pattern.thresholds)} thresholds for {pattern.b} subpatterns")
    for k, eps in enumerate(pattern.thresholds, start=1):
        if math.isnan(eps) or math.isinf(eps):
            errors.append(f"non-finite threshold at k={k}")
        elif eps < 0:
            errors.append(f"negative threshold at k={k}")
    for i in np.flatnonzero(~np.isfinite(pattern.values)):
        errors.append(f"non-finite value at i={int(i) + 1}")
    return errors


def validate_pattern(pattern: Pattern) -> Pattern:
    """Return the pattern unchanged, or raise PatternValidationError listing all violations"""
    errors = pattern_errors(pattern)
    if errors:
        raise PatternValidationError(errors)
    return pattern
