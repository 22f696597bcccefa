import math

import numpy as np
import pytest
from hypothesis import strategies as st

from core import LpOrder, Pattern

P_ORDERS = [LpOrder(1), LpOrder(2), LpOrder(3), LpOrder(math.inf)]

p_orders = st.sampled_from(P_ORDERS)


@st.composite
def patterns(draw, min_n=1, max_n=40, max_b=5, max_eps=3.0):
    n = draw(st.integers(min_n, max_n))
    b = draw(st.integers(1, min(max_b, n)))
    cuts = sorted(draw(st.sets(st.integers(1, n - 1), min_size=b - 1, max_size=b - 1))) if b > 1 else []
    bounds = np.diff([0, *cuts, n]).tolist()
    values = draw(st.lists(st.floats(-5, 5, allow_nan=False), min_size=n, max_size=n))
    thresholds = draw(st.lists(st.floats(0, max_eps, allow_nan=False), min_size=b, max_size=b))
    return Pattern(values, bounds, thresholds)


def perturb_within(pattern, p, rng, fill=None):
    """A window whose every subpattern is within budget: ||d_k||_p = u * eps_k, u in [0, 1]"""
    window = pattern.values.copy()
    for k in range(1, pattern.b + 1):
        lo, hi = pattern.index.starts[k - 1], pattern.index.ends[k - 1]
        d = rng.uniform(-1, 1, hi - lo)
        norm = np.abs(d).max() if p.is_infinite else (np.abs(d) ** p.order).sum() ** (1 / p.order)
        u = rng.uniform(0, 1) if fill is None else fill
        if norm > 0:
            window[lo:hi] += d / norm * u * pattern.thresholds[k - 1]
    return window


def embed_copies(pattern, length, rng, copies, p, spread=6.0):
    """Uniform noise stream with near-copies of the pattern at random sites"""
    stream = rng.uniform(-spread, spread, length)
    n = pattern.n
    sites = []
    if length >= n:
        for _ in range(copies):
            start = int(rng.integers(0, length - n + 1))
            stream[start:start + n] = perturb_within(pattern, p, rng)
            sites.append(start + 1)
    return stream, sites


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def small_pattern():
    return Pattern([1, 2, 3, 4], [2, 2], [0.5, 0.5])


@pytest.fixture
def pattern_file(tmp_path):
    path = tmp_path / 'pattern.txt'
    values = [0.0, 1.0, 2.5, 1.5, -0.5, -1.0, 0.5, 2.0, 3.0, 2.0, 1.0, 0.0]
    path.write_text('12 3\n4 4 4\n0.5 0.5 0.5\n' + '\n'.join(str(v) for v in values) + '\n', encoding='utf-8')
    return path
