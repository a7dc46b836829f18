"""Experiment orchestration: build a dataset, run seeded trials, aggregate.

A run is fully determined by its config. The dataset is built once from a
substream of the master seed; trial i draws its weights from a seed
derived from (master seed, i) alone, so adding or removing trials never
changes another trial's result. Each trial trains a fresh reservoir
readout (penalty chosen on a held-out tail of the training split) and is
scored on the validation split, driving the reservoir onward from its
end-of-training state since validation follows training in time.
"""

import dataclasses
import os
from dataclasses import dataclass

import numpy as np

from . import data as datamod
from .esn import EsnModel
from .esqn import EsqnModel
from .metrics import (Summary, TrialResult, nmse, results_csv, summarize,
                      summary_csv)
from .numerics import substream_rng, substream_seed
from .readout import LAMBDA_GRID, collect_states, fit_readout, select_penalty

# Substream tags under the master seed.
DATA_STREAM = 0
TRIAL_STREAM = 1

# Training splits shorter than this skip the washout by default; tiny
# sets cannot afford to discard rows.
AUTO_WASHOUT_MIN_ROWS = 400
AUTO_WASHOUT = 100

NARMA_DEFAULT_OFFSETS = tuple(range(10))
NARMA_TRAIN_SIZE = 1990
NARMA_VALIDATION_SIZE = 390


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a benchmark run depends on; see README for the file keys."""

    dataset: str = "narma"            # "narma" | "csv"
    name: str = ""                    # series label; defaults per dataset
    csv_path: str | None = None
    csv_column: int | str = 0
    lag_offsets: tuple = NARMA_DEFAULT_OFFSETS
    horizon: int = 1
    train_size: int | None = None
    validation_size: int | None = None
    train_fraction: float | None = None
    model: str = "esqn"               # "esn" | "esqn"
    reservoir_size: int = 80
    trials: int = 20
    seed: int = 1
    washout: int | None = None        # None: auto (100 on large splits, else 0)
    # ESN knobs
    density: float = 0.15
    spectral_radius: float = 0.95
    esn_weight_lo: float = -0.5
    esn_weight_hi: float = 0.5
    bias_weights_fixed_to_one: bool = False
    # ESQN knobs
    weight_lo: float = 0.0
    weight_hi: float = 0.2
    esqn_density: float = 1.0
    firing_rate: float = 1.0
    # Readout / evaluation
    lambda_grid: tuple = LAMBDA_GRID
    readout_inputs: bool = True
    reset_state_before_validation: bool = False
    rescale_on_full_series: bool = False
    nmse_on_original_units: bool = False

    def __post_init__(self):
        if self.dataset not in ("narma", "csv"):
            raise ValueError(f"unknown dataset kind {self.dataset!r}")
        if self.model not in ("esn", "esqn"):
            raise ValueError(f"unknown model kind {self.model!r}")
        if self.dataset == "csv" and not self.csv_path:
            raise ValueError("csv dataset needs csv_path")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.reservoir_size < 1:
            raise ValueError("reservoir_size must be >= 1")
        if not self.lag_offsets:
            raise ValueError("lag_offsets must be non-empty")
        object.__setattr__(self, "lag_offsets",
                           tuple(int(o) for o in self.lag_offsets))
        object.__setattr__(self, "lambda_grid",
                           tuple(float(l) for l in self.lambda_grid))
        if not self.name:
            default = "narma" if self.dataset == "narma" else \
                os.path.splitext(os.path.basename(self.csv_path))[0]
            object.__setattr__(self, "name", default)

    @classmethod
    def from_mapping(cls, mapping):
        """Build a config from string key/value pairs (config-file values)."""
        fields = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in mapping.items():
            if key not in fields:
                raise ValueError(f"unknown config key {key!r}")
            kwargs[key] = _parse_value(key, raw)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path):
        """Parse a plain-text key=value config file ('#' starts a comment).

        A relative csv_path is resolved against the config file's own
        directory, so configs can ship next to their data.
        """
        mapping = {}
        with open(path) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value")
                key, value = (part.strip() for part in line.split("=", 1))
                if key in mapping:
                    raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
                mapping[key] = value
        if "csv_path" in mapping and not os.path.isabs(mapping["csv_path"]):
            mapping["csv_path"] = os.path.normpath(
                os.path.join(os.path.dirname(os.path.abspath(path)),
                             mapping["csv_path"]))
        return cls.from_mapping(mapping)


_BOOL_KEYS = {"bias_weights_fixed_to_one", "readout_inputs",
              "reset_state_before_validation", "rescale_on_full_series",
              "nmse_on_original_units"}
_INT_KEYS = {"horizon", "train_size", "validation_size", "reservoir_size",
             "trials", "seed", "washout"}
_FLOAT_KEYS = {"train_fraction", "density", "spectral_radius", "esn_weight_lo",
               "esn_weight_hi", "weight_lo", "weight_hi", "esqn_density",
               "firing_rate"}
_LIST_KEYS = {"lag_offsets": int, "lambda_grid": float}


def _parse_value(key, raw):
    if not isinstance(raw, str):
        return raw
    raw = raw.strip()
    if key in _BOOL_KEYS:
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"config key {key!r}: expected a boolean, got {raw!r}")
    if key in _INT_KEYS:
        return int(raw)
    if key in _FLOAT_KEYS:
        return float(raw)
    if key in _LIST_KEYS:
        cast = _LIST_KEYS[key]
        return tuple(cast(part.strip()) for part in raw.split(",") if part.strip())
    if key == "csv_column":
        try:
            return int(raw)
        except ValueError:
            return raw
    return raw


@dataclass(frozen=True)
class PreparedData:
    train: datamod.SupervisedDataset
    validation: datamod.SupervisedDataset
    target_rescaler: datamod.Rescaler | None


@dataclass(frozen=True)
class ExperimentOutcome:
    config: ExperimentConfig
    results: tuple
    summary: Summary
    trace: np.ndarray  # columns: t, target, prediction (final successful trial)


def prepare_data(config):
    """Build the rescaled, windowed, chronologically split dataset."""
    max_off = max(config.lag_offsets)
    if config.dataset == "narma":
        train_size = config.train_size if config.train_size is not None \
            else NARMA_TRAIN_SIZE
        val_size = config.validation_size if config.validation_size is not None \
            else NARMA_VALIDATION_SIZE
        total = train_size + val_size + max_off
        s, b_next = datamod.generate_narma10(
            total, substream_rng(config.seed, DATA_STREAM))
        # training rows touch s and b indices below max_off + train_size
        fit_end = len(s) if config.rescale_on_full_series else max_off + train_size
        in_scaler = datamod.Rescaler.fit(s[:fit_end])
        target_scaler = datamod.Rescaler.fit(b_next[:fit_end])
        dataset = datamod.lag_paired_series(
            in_scaler.apply(s), target_scaler.apply(b_next), config.lag_offsets)
        train, val = datamod.split_dataset(dataset, train_size=train_size,
                                           validation_size=val_size)
        return PreparedData(train=train, validation=val, target_rescaler=target_scaler)

    series = datamod.load_csv(config.csv_path, config.csv_column).values
    n_rows = len(series) - max_off - config.horizon
    if n_rows < 2:
        raise ValueError("series too short for the requested lags and horizon")
    if config.train_size is not None:
        train_size = config.train_size
    else:
        fraction = config.train_fraction if config.train_fraction is not None else 2 / 3
        train_size = round(fraction * n_rows)
    # training rows use series indices up to max_off + train_size - 1 + horizon
    fit_end = len(series) if config.rescale_on_full_series \
        else max_off + train_size + config.horizon
    scaler = datamod.Rescaler.fit(series[:fit_end])
    dataset = datamod.make_lagged_dataset(scaler.apply(series), config.lag_offsets,
                                          horizon=config.horizon)
    train, val = datamod.split_dataset(dataset, train_size=train_size,
                                       validation_size=config.validation_size)
    return PreparedData(train=train, validation=val, target_rescaler=scaler)


def resolve_washout(config, train_rows):
    if config.washout is not None:
        washout = config.washout
    else:
        washout = AUTO_WASHOUT if train_rows > AUTO_WASHOUT_MIN_ROWS else 0
    if not 0 <= washout < train_rows:
        raise ValueError(f"washout {washout} leaves no training rows")
    return washout


def build_model(config, n_in, rng):
    if config.model == "esn":
        return EsnModel.random(
            n_in, config.reservoir_size, density=config.density,
            target_rho=config.spectral_radius, rng=rng,
            weight_lo=config.esn_weight_lo, weight_hi=config.esn_weight_hi,
            bias_fixed_to_one=config.bias_weights_fixed_to_one)
    return EsqnModel.random(
        n_in, config.reservoir_size, rng=rng,
        weight_lo=config.weight_lo, weight_hi=config.weight_hi,
        density=config.esqn_density, rate=config.firing_rate)


def run_trial(config, prepared, washout, trial_index):
    """One independently seeded train-and-score pass.

    Returns (TrialResult, trace) where trace stacks the validation row
    index, target and prediction columns. Raises FloatingPointError if a
    non-finite state or prediction shows up, so the caller can exclude
    the trial.
    """
    trial_seed = substream_seed(config.seed, TRIAL_STREAM, trial_index)
    rng = np.random.default_rng(trial_seed)
    model = build_model(config, prepared.train.inputs.shape[1], rng)

    regressors = collect_states(model, prepared.train.inputs, washout,
                                include_inputs=config.readout_inputs)
    targets = prepared.train.targets[washout:].T
    lam, _ = select_penalty(regressors, targets, grid=config.lambda_grid)
    readout = fit_readout(regressors, targets, lam,
                          include_inputs=config.readout_inputs)

    if config.reset_state_before_validation:
        if isinstance(model, EsnModel):
            model.reset()
        else:
            model.reset(rng=rng)

    val_regressors = collect_states(model, prepared.validation.inputs, 0,
                                    include_inputs=config.readout_inputs)
    predictions = readout.predict_matrix(val_regressors).T
    if not (np.all(np.isfinite(val_regressors)) and np.all(np.isfinite(predictions))):
        raise FloatingPointError(f"trial {trial_index}: non-finite state or prediction")

    val_targets = prepared.validation.targets
    if config.nmse_on_original_units:
        scaler = prepared.target_rescaler
        score = nmse(scaler.invert(val_targets), scaler.invert(predictions))
    else:
        score = nmse(val_targets, predictions)

    result = TrialResult(series=config.name, model=config.model,
                         trial=trial_index, seed=trial_seed, nmse=score,
                         ridge_lambda=lam, reservoir_size=config.reservoir_size)
    trace = np.column_stack([np.arange(val_targets.shape[0], dtype=float),
                             val_targets[:, 0], predictions[:, 0]])
    return result, trace


def run_experiment(config):
    """Run all trials of one (dataset, model) experiment and aggregate.

    Trials whose states or predictions go non-finite are excluded and
    counted in the summary's failure tally rather than aborting the run.
    """
    prepared = prepare_data(config)
    washout = resolve_washout(config, prepared.train.n_rows)
    results = []
    trace = None
    failures = 0
    for i in range(config.trials):
        try:
            result, trial_trace = run_trial(config, prepared, washout, i)
        except FloatingPointError:
            failures += 1
            continue
        results.append(result)
        trace = trial_trace
    if not results:
        raise ArithmeticError(f"all {config.trials} trials failed")
    summary = summarize(results, failures=failures)
    return ExperimentOutcome(config=config, results=tuple(results),
                             summary=summary, trace=trace)


def reservoir_size_sweep(config, sizes):
    """run_experiment per reservoir size, sharing the master seed."""
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("sizes must be non-empty")
    outcomes = []
    for size in sizes:
        sized = dataclasses.replace(config, reservoir_size=size)
        outcomes.append((size, run_experiment(sized)))
    return outcomes


TRACE_HEADER = "t,target,prediction"
SWEEP_HEADER = "reservoir_size,mean_nmse,ci_halfwidth"


def trace_csv(trace):
    lines = [TRACE_HEADER]
    for t, target, pred in trace:
        lines.append(f"{int(t)},{float(target)!r},{float(pred)!r}")
    return "\n".join(lines) + "\n"


def sweep_csv(outcomes):
    lines = [SWEEP_HEADER]
    for size, outcome in outcomes:
        s = outcome.summary
        hw = "" if s.ci_halfwidth is None else repr(s.ci_halfwidth)
        lines.append(f"{size},{s.mean_nmse!r},{hw}")
    return "\n".join(lines) + "\n"


def write_experiment_outputs(outcome, outdir="."):
    """Emit results.csv, summary.csv and trace.csv; returns their paths."""
    paths = {}
    for fname, text in (("results.csv", results_csv(outcome.results)),
                        ("summary.csv", summary_csv([outcome.summary])),
                        ("trace.csv", trace_csv(outcome.trace))):
        path = os.path.join(outdir, fname)
        with open(path, "w") as fh:
            fh.write(text)
        paths[fname] = path
    return paths
