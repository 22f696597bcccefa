import math

import pytest

from bench import AXES, BenchSpec, run_bench, summary_table
from core import LpOrder, UsageError
from datagen import random_pattern

TIMING = ['total_ns_per_window', 'pruning_ns_per_window', 'speedup']


@pytest.fixture
def spec():
    return BenchSpec(
        axis='p', patterns=[random_pattern(40, 3, seed=2)],
        values=[LpOrder(1), LpOrder(2), LpOrder(math.inf)],
        length=4000, seed=5, reps=1, probability=1e-3, block_ratio=0.1,
    )


def test_sweep_cardinality_and_baseline(spec):
    frame = run_bench(spec, threads=1)
    assert len(frame) == 9
    ss = frame[frame['algorithm'] == 'SS']
    assert (ss['speedup'] == 1.0).all()
    for value, cell in frame.groupby('value'):
        counts = cell.set_index('algorithm')['matches']
        assert counts['ELB-ELE'] == counts['SS'] == counts['ELB-SEQ']
    assert {'seed', 'R', 'probability', 'threshold_ratio', 'p', 'generator'} <= set(frame.columns)
    assert 'ELB-SEQ' in summary_table(frame)


def test_counters_repeat_across_runs(spec):
    first = run_bench(spec, threads=1).drop(columns=TIMING)
    second = run_bench(spec, threads=1).drop(columns=TIMING)
    assert first.equals(second)


def test_default_axis_values():
    spec = BenchSpec(axis='block_ratio', patterns=[random_pattern(20, 2, seed=1)])
    assert spec.values == AXES['block_ratio']
    assert max(spec.values) <= 0.5


def test_spec_validation():
    pattern = random_pattern(20, 2, seed=1)
    with pytest.raises(UsageError):
        BenchSpec(axis='distance', patterns=[pattern])
    with pytest.raises(UsageError):
        BenchSpec(axis='block_ratio', patterns=[pattern], values=[0.6])
    with pytest.raises(UsageError):
        BenchSpec(axis='p', patterns=[pattern], block_ratio=0.7)
    with pytest.raises(UsageError):
        BenchSpec(axis='p', patterns=[])
    with pytest.raises(UsageError):
        BenchSpec(axis='p', patterns=[pattern], reps=0)
