import math
import random

import numpy as np
import pytest

from core import DataError, Pattern
from oracle import SequentialScanner, sequential_scan
from conftest import P_ORDERS, embed_copies


def naive_matches(values, bounds, eps, stream, p):
    """Every window, every subpattern, no early exit, no shared code"""
    n = len(values)
    found = []
    for t in range(len(stream) - n + 1):
        ok = []
        start = 0
        for length, limit in zip(bounds, eps):
            diffs = [abs(stream[t + i] - values[i]) for i in range(start, start + length)]
            if p == math.inf:
                dist = max(diffs)
            else:
                dist = sum(d ** p for d in diffs) ** (1.0 / p)
            ok.append(dist <= limit)
            start += length
        if all(ok):
            found.append(t + 1)
    return found


def test_single_embedding_found(rng):
    values = [0.0, 1.0, 0.5, -0.5]
    pattern = Pattern(values, [2, 2], [0.05, 0.05])
    stream = rng.uniform(50, 60, 100)
    stream[40:44] = values
    assert sequential_scan(pattern, stream, 2).matches == [41]


def test_zero_thresholds_on_itself():
    pattern = Pattern([3, 1, 4, 1, 5], [2, 3], [0.0, 0.0])
    report = sequential_scan(pattern, [3, 1, 4, 1, 5], 2)
    assert report.matches == [1]
    assert report.windows_total == 1


def test_empty_stream():
    report = sequential_scan(Pattern([1, 2], [2], [1.0]), [], 1)
    assert report.matches == [] and report.windows_total == 0


def test_non_finite_value_rejected():
    with pytest.raises(DataError, match="t=2"):
        sequential_scan(Pattern([1, 2], [2], [1.0]), [1.0, math.inf, 2.0], 1)


def test_touch_counter_counts_checked_subpatterns():
    pattern = Pattern([0, 0, 0, 0], [1, 3], [0.0, 0.0])
    # first subpattern fails on every window but the last
    report = sequential_scan(pattern, [1, 1, 1, 0, 0, 0, 0], math.inf)
    assert report.matches == [4]
    assert report.element_touches == 3 * 1 + 4


def test_incremental_feed(rng):
    pattern = Pattern(rng.normal(size=6), [3, 3], [1.5, 1.5])
    stream = rng.normal(size=300)
    scanner = SequentialScanner(pattern, 2)
    for value in stream:
        scanner.push(value)
    assert scanner.report() == sequential_scan(pattern, stream, 2)


def test_agrees_with_naive_scan():
    rng = np.random.default_rng(7)
    rand = random.Random(7)
    for _ in range(1000):
        n = rand.randint(1, 12)
        b = rand.randint(1, n)
        cuts = sorted(rand.sample(range(1, n), b - 1))
        bounds = np.diff([0, *cuts, n]).tolist()
        values = rng.uniform(-3, 3, n)
        eps = rng.uniform(0, 2, b).tolist()
        pattern = Pattern(values, bounds, eps)
        p = rand.choice(P_ORDERS)
        stream, _ = embed_copies(pattern, rand.randint(0, 60), rng, copies=2, p=p, spread=4)
        expected = naive_matches(values.tolist(), bounds, eps, stream.tolist(), p.order)
        assert sequential_scan(pattern, stream, p).matches == expected
