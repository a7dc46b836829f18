"""Whitespace-separated text blocks for model and spec snapshots."""

import numpy as np


def matrix_lines(m):
    """Rows of a 1-d or 2-d array as whitespace-separated repr strings."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    return [" ".join(repr(float(v)) for v in row) for row in m]


def parse_row(line, expected, lineno):
    parts = line.split()
    if len(parts) != expected:
        raise ValueError(f"line {lineno}: expected {expected} values, got {len(parts)}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ValueError(f"line {lineno}: unparseable number ({exc})") from None


def parse_matrix(lines, rows, cols, start_lineno):
    if len(lines) < rows:
        raise ValueError(f"line {start_lineno}: expected {rows} more rows")
    return np.vstack([parse_row(lines[i], cols, start_lineno + i) for i in range(rows)])
