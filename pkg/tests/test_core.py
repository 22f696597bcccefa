import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core import (
    LpOrder, Pattern, PatternValidationError, UsageError, WindowView,
    exact_match, lp_distance, validate_pattern, value_range,
)
from conftest import P_ORDERS, p_orders, patterns, perturb_within

finite_lists = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=30)


@pytest.mark.parametrize('x, y, p, expected', [
    ((1, 2, 3), (1, 2, 3), 2, 0.0),
    ((0, 0), (3, 4), 2, 5.0),
    ((1, 5), (2, 2), math.inf, 3.0),
    ((1, 5), (2, 2), 1, 4.0),
    ((0, 0), (1, 1), 3, 2 ** (1 / 3)),
])
def test_lp_distance_examples(x, y, p, expected):
    assert lp_distance(x, y, p) == pytest.approx(expected)


def test_lp_distance_rejects_bad_input():
    with pytest.raises(UsageError):
        lp_distance((1, 2), (1, 2, 3), 2)
    with pytest.raises(UsageError):
        lp_distance((1, math.nan), (1, 2), 2)
    with pytest.raises(UsageError):
        lp_distance((), (), 1)


@given(st.data(), finite_lists, p_orders)
def test_lp_distance_symmetric_and_zero_on_self(data, x, p):
    y = data.draw(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=len(x), max_size=len(x)))
    assert lp_distance(x, x, p) == 0
    assert lp_distance(x, y, p) == lp_distance(y, x, p)


@given(st.data(), finite_lists)
def test_max_norm_bounded_by_finite_norms(data, x):
    y = data.draw(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=len(x), max_size=len(x)))
    top = lp_distance(x, y, math.inf)
    for p in (1, 2, 3):
        assert top <= lp_distance(x, y, p) * (1 + 1e-12) + 1e-12


def test_lp_order_parsing():
    assert LpOrder.parse('inf').is_infinite
    assert LpOrder.parse('∞') == LpOrder(math.inf)
    assert LpOrder.parse('3').order == 3
    assert LpOrder(2.0).order == 2
    assert str(LpOrder(math.inf)) == 'inf'
    for bad in (0, -1, 1.5, 'two', True):
        with pytest.raises(UsageError):
            LpOrder.parse(bad)


def test_exact_match_examples(small_pattern):
    assert exact_match(small_pattern, WindowView(1, np.array([1.0, 2, 3, 4])), 2)
    assert not exact_match(small_pattern, [1, 2, 3, 5], 1)
    flat = Pattern([0, 0, 0], [3], [1.0])
    assert exact_match(flat, [0.5, 0.5, 0.5], 2)


def test_exact_match_boundary_is_inclusive():
    pattern = Pattern([0, 0], [2], [5.0])
    assert exact_match(pattern, [3, 4], 2)
    assert not exact_match(pattern, [3, 4.001], 2)


def test_exact_match_length_mismatch(small_pattern):
    with pytest.raises(UsageError):
        exact_match(small_pattern, [1, 2, 3], 2)


@settings(max_examples=200)
@given(patterns(), p_orders, st.integers(0, 2 ** 32 - 1), st.booleans())
def test_early_exit_is_invisible(pattern, p, seed, inside):
    rng = np.random.default_rng(seed)
    window = perturb_within(pattern, p, rng) if inside else rng.uniform(-8, 8, pattern.n)
    every = all(
        lp_distance(pattern.subpattern(k), window[pattern.index.starts[k - 1]:pattern.index.ends[k - 1]], p)
        <= pattern.thresholds[k - 1]
        for k in range(1, pattern.b + 1)
    )
    assert exact_match(pattern, window, p) == every


@pytest.mark.parametrize('segment, expected', [((1, 2, 3), 2), ((5, 5, 5), 0), ((-1, 4, 0), 5)])
def test_value_range(segment, expected):
    assert value_range(segment) == expected


def test_value_range_empty():
    with pytest.raises(UsageError):
        value_range([])


def test_lp_order_from_text_and_junk():
    assert LpOrder('2') == LpOrder(2)
    assert LpOrder('inf').is_infinite
    for bad in ('two', '1.5', None, [2]):
        with pytest.raises(UsageError):
            LpOrder(bad)


def test_validate_pattern_reports_fractional_length():
    pattern = Pattern([1, 2, 3, 4], [1.5, 2.5], [0.1, 0.1])
    with pytest.raises(PatternValidationError) as err:
        validate_pattern(pattern)
    assert "non-integer subpattern length 1.5 at k=1" in err.value.errors
    assert "non-integer subpattern length 2.5 at k=2" in err.value.errors
    assert Pattern([1, 2], [2.0], [0.1]).boundaries == (2,)
    with pytest.raises(UsageError):
        Pattern([1, 2], ['x'], [0.1])


def test_validate_pattern_accepts_valid():
    pattern = Pattern([1, 2, 3, 4], [2, 2], [0.1, 0.1])
    assert validate_pattern(pattern) is pattern


def test_validate_pattern_reports_boundary_sum():
    with pytest.raises(PatternValidationError) as err:
        validate_pattern(Pattern([1, 2, 3, 4], [2, 3], [0.1, 0.1]))
    assert "boundaries sum 5 ≠ n=4" in err.value.errors


def test_validate_pattern_reports_every_violation():
    with pytest.raises(PatternValidationError) as err:
        validate_pattern(Pattern([1, math.inf, 3], [0, 2], [-1, 0.5, 0.2]))
    errors = err.value.errors
    assert "negative threshold at k=1" in errors
    assert "subpattern length 0 < 1 at k=1" in errors
    assert "3 thresholds for 2 subpatterns" in errors
    assert "non-finite value at i=2" in errors
    assert "boundaries sum 2 ≠ n=3" in errors


def test_subpattern_index_alignment():
    pattern = Pattern([0] * 6, [1, 3, 2], [0, 0, 0])
    assert [pattern.index.subpattern_of(i) for i in range(1, 7)] == [1, 2, 2, 2, 3, 3]
    assert pattern.subpattern(2).tolist() == [0, 0, 0]


def test_types_are_immutable(small_pattern):
    with pytest.raises(ValueError):
        small_pattern.values[0] = 9.0
    assert len(P_ORDERS) == 4
