"""Dataset construction: NARMA-10 generation, CSV ingestion, rescaling,
lagged windowing and chronological splits.

Everything here is deterministic given its inputs; splits preserve time
order (no shuffling) so validation targets always postdate training
targets.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (CsvLoadError, DegenerateScaleError, DimensionError,
                     GenerationError)

NARMA_ORDER = 10
NARMA_DIVERGENCE_LIMIT = 10.0
NARMA_ATTEMPTS = 10
DEFAULT_WARMUP = 200


@dataclass(frozen=True)
class TimeSeries:
    """Ordered real-valued samples, optionally tagged with a sampling period."""

    values: np.ndarray
    period: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.ndim != 1 or self.values.shape[0] == 0:
            raise DimensionError("a time series is a non-empty 1-d array")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("time series values must be finite")

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class SupervisedDataset:
    """Paired input matrix (K x N_a) and target matrix (K x N_b)."""

    inputs: np.ndarray
    targets: np.ndarray
    split: str = ""

    def __post_init__(self):
        object.__setattr__(self, "inputs", np.atleast_2d(np.asarray(self.inputs, dtype=float)))
        object.__setattr__(self, "targets", np.atleast_2d(np.asarray(self.targets, dtype=float)))
        if self.inputs.shape[0] != self.targets.shape[0]:
            raise DimensionError("inputs and targets must have the same row count")
        if self.inputs.shape[0] < 1:
            raise DimensionError("a dataset needs at least one row")

    @property
    def n_rows(self):
        return self.inputs.shape[0]


@dataclass
class Rescaler:
    """Affine map sending a reference segment's min to 0 and max to 1.

    Values outside the reference range map outside [0, 1] and are clipped;
    ``clip_count`` accumulates how many points were clipped. invert is the
    exact inverse on unclipped values.
    """

    lo: float
    hi: float
    clip_count: int = field(default=0)

    @classmethod
    def fit(cls, values):
        values = np.asarray(values, dtype=float)
        lo, hi = float(values.min()), float(values.max())
        if not hi > lo:
            raise DegenerateScaleError("reference segment is constant; no scale exists")
        return cls(lo=lo, hi=hi)

    def apply(self, values):
        y = (np.asarray(values, dtype=float) - self.lo) / (self.hi - self.lo)
        clipped = int(np.count_nonzero((y < 0.0) | (y > 1.0)))
        self.clip_count += clipped
        return np.clip(y, 0.0, 1.0)

    def invert(self, values):
        return self.lo + np.asarray(values, dtype=float) * (self.hi - self.lo)


def narma10_response(drive):
    """Run the order-10 NARMA recurrence over a drive sequence.

    Returns the array of next-step outputs: element t is b(t+1) where

        b(t+1) = 0.3 b(t) + 0.05 b(t) sum_{i=0..9} b(t-i)
                 + 1.5 s(t-9) s(t) + 0.1

    with zero initial history (b and s vanish for t <= 0).
    """
    s = np.asarray(drive, dtype=float)
    n = s.shape[0]
    out = np.empty(n)
    window = np.zeros(NARMA_ORDER)  # b(t) .. b(t-9)
    b = 0.0
    for t in range(n):
        s_old = s[t - (NARMA_ORDER - 1)] if t >= NARMA_ORDER - 1 else 0.0
        nxt = 0.3 * b + 0.05 * b * window.sum() + 1.5 * s_old * s[t] + 0.1
        out[t] = nxt
        window[t % NARMA_ORDER] = nxt
        b = nxt
    return out


def generate_narma10(n, rng, warmup_discard=DEFAULT_WARMUP):
    """Generate n aligned (s(t), b(t+1)) pairs of the NARMA-10 system.

    The drive s is uniform on [0, 0.5]. The first ``warmup_discard`` pairs
    are dropped so the zero initial history washes out. Divergent runs
    (|b| exceeding 10, possible for unlucky drives) are regenerated from
    the generator's following draws, at most NARMA_ATTEMPTS times.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if warmup_discard < 0:
        raise ValueError("warmup_discard must be >= 0")
    total = warmup_discard + n
    for _ in range(NARMA_ATTEMPTS):
        s = rng.uniform(0.0, 0.5, total)
        # divergent drives overflow before the check rejects them
        with np.errstate(over="ignore", invalid="ignore"):
            b_next = narma10_response(s)
        if np.all(np.abs(b_next) <= NARMA_DIVERGENCE_LIMIT):
            return s[warmup_discard:], b_next[warmup_discard:]
    raise GenerationError(
        f"NARMA-10 diverged on {NARMA_ATTEMPTS} consecutive attempts")


def load_csv(path, column=0):
    """Read one column of a CSV file as a TimeSeries.

    ``column`` is a zero-based index or, when the file starts with a
    header row, a column name. Rows keep file order. Problems raise
    CsvLoadError carrying the offending row and column numbers (1-based
    file line numbers).
    """
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CsvLoadError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise CsvLoadError(f"{path}: file is empty")

    def _is_number(cell):
        try:
            float(cell)
            return True
        except ValueError:
            return False

    has_header = any(not _is_number(cell) for cell in rows[0] if cell.strip())
    if isinstance(column, str):
        if not has_header:
            raise CsvLoadError(f"{path}: no header row to resolve column {column!r}")
        try:
            idx = rows[0].index(column)
        except ValueError:
            raise CsvLoadError(f"{path}: no column named {column!r}") from None
    else:
        idx = int(column)
    data_rows = rows[1:] if has_header else rows
    first_line = 2 if has_header else 1

    values = []
    for offset, row in enumerate(data_rows):
        lineno = first_line + offset
        if not row or all(not cell.strip() for cell in row):
            continue
        if idx >= len(row):
            raise CsvLoadError(f"{path}: row {lineno} has no column {idx}",
                               row=lineno, col=idx)
        cell = row[idx].strip()
        try:
            values.append(float(cell))
        except ValueError:
            raise CsvLoadError(
                f"{path}: unparseable value {cell!r} at row {lineno}, column {idx}",
                row=lineno, col=idx) from None
    if not values:
        raise CsvLoadError(f"{path}: selected column is empty", col=idx)
    return TimeSeries(values=np.array(values))


def save_series_csv(path, values, value_header="value"):
    """Write a series as a two-column CSV (t, value), repr-formatted."""
    values = np.asarray(values, dtype=float)
    lines = [f"t,{value_header}"]
    lines += [f"{t},{float(v)!r}" for t, v in enumerate(values)]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _series_values(series):
    return series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float)


def make_lagged_dataset(series, offsets, horizon=1):
    """Window a series into (lagged inputs, future target) rows.

    Row k (at time t = max(offsets) + k) has inputs [x(t - o) for o in
    offsets] and target x(t + horizon); there are len - max(offsets) -
    horizon rows.
    """
    x = _series_values(series)
    offsets = [int(o) for o in offsets]
    if not offsets or any(o < 0 for o in offsets):
        raise ValueError("offsets must be a non-empty list of nonnegative integers")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    max_off = max(offsets)
    n_rows = x.shape[0] - max_off - horizon
    if n_rows < 1:
        raise ValueError(
            f"series of length {x.shape[0]} is too short for offsets up to "
            f"{max_off} and horizon {horizon}")
    inputs = np.column_stack([x[max_off - o:max_off - o + n_rows] for o in offsets])
    targets = x[max_off + horizon:max_off + horizon + n_rows][:, None]
    return SupervisedDataset(inputs=inputs, targets=targets)


def lag_paired_series(inputs_series, targets_series, offsets):
    """Window pre-aligned (input(t), target(t)) pairs with input lags.

    Row k (at t = max(offsets) + k) has inputs [s(t - o) for o in offsets]
    and target y(t), keeping the original pair alignment; the first
    max(offsets) pairs are consumed by the lag window.
    """
    s = _series_values(inputs_series)
    y = _series_values(targets_series)
    if s.shape[0] != y.shape[0]:
        raise DimensionError("input and target series must have equal length")
    offsets = [int(o) for o in offsets]
    if not offsets or any(o < 0 for o in offsets):
        raise ValueError("offsets must be a non-empty list of nonnegative integers")
    max_off = max(offsets)
    n_rows = s.shape[0] - max_off
    if n_rows < 1:
        raise ValueError("series too short for the requested offsets")
    inputs = np.column_stack([s[max_off - o:max_off - o + n_rows] for o in offsets])
    targets = y[max_off:][:, None]
    return SupervisedDataset(inputs=inputs, targets=targets)


def split_dataset(dataset, train_size=None, train_fraction=None, validation_size=None):
    """Chronological split into (train, validation), order preserved.

    Give either an explicit train_size (optionally with validation_size,
    defaulting to the remainder) or a train_fraction.
    """
    k = dataset.n_rows
    if (train_size is None) == (train_fraction is None):
        raise ValueError("pass exactly one of train_size or train_fraction")
    if train_fraction is not None:
        if not 0.0 < train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        train_size = round(train_fraction * k)
    train_size = int(train_size)
    if validation_size is None:
        validation_size = k - train_size
    validation_size = int(validation_size)
    if train_size < 1 or validation_size < 1:
        raise ValueError("both splits need at least one row")
    if train_size + validation_size > k:
        raise ValueError(
            f"requested {train_size}+{validation_size} rows from a dataset of {k}")
    train = SupervisedDataset(inputs=dataset.inputs[:train_size],
                              targets=dataset.targets[:train_size], split="train")
    val = SupervisedDataset(
        inputs=dataset.inputs[train_size:train_size + validation_size],
        targets=dataset.targets[train_size:train_size + validation_size],
        split="validation")
    return train, val


def dataset_csv(dataset, offsets=None):
    """Snapshot a dataset as CSV, input columns named by lag offset."""
    n_in = dataset.inputs.shape[1]
    n_out = dataset.targets.shape[1]
    if offsets is not None and len(offsets) == n_in:
        in_names = [f"lag{o}" for o in offsets]
    else:
        in_names = [f"in{i}" for i in range(n_in)]
    out_names = [f"target{j}" for j in range(n_out)] if n_out > 1 else ["target"]
    lines = [",".join(in_names + out_names)]
    for i in range(dataset.n_rows):
        cells = [repr(float(v)) for v in dataset.inputs[i]]
        cells += [repr(float(v)) for v in dataset.targets[i]]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
