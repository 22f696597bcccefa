"""
Sequential Scanning (SS): verify every sliding window exactly.

Shares the distance and verification code in core, nothing from matcher.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from core import DataError, LpOrder, Pattern, validate_pattern, verify_window

logger = logging.getLogger(__name__)


@dataclass
class OracleReport:
    matches: list = field(default_factory=list)
    element_touches: int = 0
    windows_total: int = 0


class SequentialScanner:
    """Window-by-window verification over a live stream"""

    def __init__(self, pattern: Pattern, p):
        self.pattern = validate_pattern(pattern)
        self.p = LpOrder.parse(p)
        self._window = deque(maxlen=pattern.n)
        self._count = 0
        self._report = OracleReport()

    def push(self, value):
        self.extend((value,))

    def extend(self, values):
        if isinstance(values, np.ndarray):
            values = values.tolist()
        n = self.pattern.n
        window = self._window
        report = self._report
        for value in values:
            t = self._count + 1
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise DataError(f"non-numeric stream value at t={t}: {value!r}") from None
            if not math.isfinite(value):
                raise DataError(f"non-finite stream value at t={t}: {value}")
            window.append(value)
            self._count = t
            if t < n:
                continue
            matched, touched = verify_window(self.pattern, np.fromiter(window, np.float64, n), self.p)
            report.windows_total += 1
            report.element_touches += touched
            if matched:
                report.matches.append(t - n + 1)

    def report(self) -> OracleReport:
        r = self._report
        return OracleReport(list(r.matches), r.element_touches, r.windows_total)


def sequential_scan(pattern: Pattern, stream, p) -> OracleReport:
    """All 1-based window starts whose every subpattern is within threshold"""
    scanner = SequentialScanner(pattern, p)
    scanner.extend(stream)
    report = scanner.report()
    logger.info("ss p=%s: %d windows, %d matches", scanner.p, report.windows_total, len(report.matches))
    return report
