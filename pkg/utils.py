"""
Utility functions for reading and writing pattern, stream and report files
"""
import json
import logging
import os

import numpy as np
import pandas as pd

from core import FormatError, Pattern, validate_pattern

logger = logging.getLogger(__name__)

STATS_COLUMNS = [
    'windows_total', 'windows_pruned', 'candidates_verified', 'block_checks',
    'element_touches_pruning', 'element_touches_verify', 'pruning_power',
]


def _ensure_parent(path):
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)


def _decode(path, line_no, raw):
    try:
        return raw.decode('utf-8')
    except UnicodeDecodeError:
        raise FormatError(path, line_no, "not valid UTF-8 text") from None


def _parse_numbers(path, line_no, text, kind, count=None):
    fields = text.split()
    if count is not None and len(fields) != count:
        raise FormatError(path, line_no, f"expected {count} {kind.__name__} values, got {len(fields)}")
    try:
        return [kind(f) for f in fields]
    except ValueError:
        raise FormatError(path, line_no, f"invalid {kind.__name__} value in {text.strip()!r}") from None


def read_pattern(path, validate=True):
    """
    Read a pattern file
    Line 1: n b; line 2: b subpattern lengths; line 3: b thresholds;
    lines 4..: one pattern value per line
    """
    with open(path, 'rb') as f:
        lines = [_decode(path, line_no, raw) for line_no, raw in enumerate(f.read().splitlines(), start=1)]
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) < 3:
        raise FormatError(path, len(lines) + 1, "pattern file needs a header, lengths and thresholds")

    n, b = _parse_numbers(path, 1, lines[0], int, 2)
    boundaries = _parse_numbers(path, 2, lines[1], int, b)
    thresholds = _parse_numbers(path, 3, lines[2], float, b)

    values = []
    for line_no, line in enumerate(lines[3:], start=4):
        values.extend(_parse_numbers(path, line_no, line, float, 1))
    if len(values) != n:
        raise FormatError(path, len(lines) + 1, f"header declares n={n} but file has {len(values)} values")

    name = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    pattern = Pattern(values, boundaries, thresholds, name=name)
    return validate_pattern(pattern) if validate else pattern


def write_pattern(path, pattern):
    """Write a pattern file"""
    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(f"{pattern.n} {pattern.b}\n")
        f.write(' '.join(str(length) for length in pattern.boundaries) + '\n')
        f.write(' '.join(repr(float(eps)) for eps in pattern.thresholds) + '\n')
        for value in pattern.values.tolist():
            f.write(f"{value!r}\n")


def iter_stream(path):
    """Yield stream values lazily; line number == 1-based timestamp"""
    with open(path, 'rb') as f:
        pending_blank = None
        for line_no, raw in enumerate(f, start=1):
            text = _decode(path, line_no, raw).strip()
            if not text:
                pending_blank = pending_blank or line_no
                continue
            if pending_blank is not None:
                raise FormatError(path, pending_blank, "blank line inside stream")
            try:
                yield float(text)
            except ValueError:
                raise FormatError(path, line_no, f"invalid stream value {text!r}") from None


def load_stream(path):
    """Read a whole stream into memory"""
    return np.fromiter(iter_stream(path), dtype=np.float64)


def write_stream(path, values):
    """Write a stream file with round-trippable values"""
    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for value in np.asarray(values, dtype=np.float64).tolist():
            f.write(f"{value!r}\n")


def write_matches(path, matches):
    _ensure_parent(path)
    pd.DataFrame({'match_start': pd.Series(matches, dtype='int64')}).to_csv(
        path, index=False, lineterminator='\n')


def write_embed_log(path, starts):
    _ensure_parent(path)
    pd.DataFrame({'embed_start': pd.Series(starts, dtype='int64')}).to_csv(
        path, index=False, lineterminator='\n')


def stats_frame(stats, power):
    row = dict(stats)
    row['pruning_power'] = np.nan if power is None else power
    return pd.DataFrame([row], columns=STATS_COLUMNS)


def write_stats(path, stats, power):
    """Single-row counter CSV; pruning_power empty when not applicable"""
    _ensure_parent(path)
    stats_frame(stats, power).to_csv(path, index=False, lineterminator='\n')


def write_sidecar(path, meta):
    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write('\n')


def read_sidecar(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def write_envelope(path, envelope):
    """Envelope CSV: index,upper,lower for valid 1-based indices"""
    _ensure_parent(path)
    rows = list(envelope.rows())
    pd.DataFrame(rows, columns=['index', 'upper', 'lower']).to_csv(
        path, index=False, lineterminator='\n')


def write_block_bounds(path, bounds):
    """Block bounds CSV: block,upper,lower,active"""
    _ensure_parent(path)
    frame = pd.DataFrame({
        'block': np.arange(1, bounds.N + 1),
        'upper': bounds.upper,
        'lower': bounds.lower,
        'active': [bounds.is_active(j) for j in range(1, bounds.N + 1)],
    })
    frame.to_csv(path, index=False, lineterminator='\n')
    logger.info("Wrote %d block bounds to %s", bounds.N, path)
