"""The trained output layer: regressor collection, ridge fit, prediction.

The readout is the only trained object. It maps the concatenated
regressor [1; a(t); x(t)] (bias, current input, reservoir state) to the
outputs through a single weight matrix fitted offline by ridge
regression. Direct input-to-readout terms can be dropped, in which case
the regressor is just [1; x(t)].
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .metrics import nmse
from .numerics import ridge_solve

# Default penalty grid searched when fitting; chosen per dataset on a
# held-out tail of the training split.
LAMBDA_GRID = tuple(10.0 ** k for k in range(-8, 0))
HOLDOUT_FRACTION = 0.2


@dataclass(frozen=True)
class Readout:
    """Affine map y = w_out [1; a; x] (or [1; x] without input terms)."""

    w_out: np.ndarray
    include_inputs: bool = True

    def __post_init__(self):
        object.__setattr__(self, "w_out", np.asarray(self.w_out, dtype=float))
        if self.w_out.ndim != 2:
            raise DimensionError("w_out must be 2-d")
        if not np.all(np.isfinite(self.w_out)):
            raise ValueError("w_out must be finite")

    @property
    def n_out(self):
        return self.w_out.shape[0]

    def predict(self, inputs, state):
        """Evaluate the affine readout for one time step."""
        z = make_regressor(inputs, state, self.include_inputs)
        if z.shape[0] != self.w_out.shape[1]:
            raise DimensionError(
                f"regressor length {z.shape[0]} does not match w_out columns "
                f"{self.w_out.shape[1]}")
        return self.w_out @ z

    def predict_matrix(self, regressors):
        """Predictions for a whole regressor matrix (D x K) at once."""
        regressors = np.asarray(regressors, dtype=float)
        if regressors.ndim != 2 or regressors.shape[0] != self.w_out.shape[1]:
            raise DimensionError("regressor matrix does not match w_out columns")
        return self.w_out @ regressors


def make_regressor(inputs, state, include_inputs=True):
    a = np.atleast_1d(np.asarray(inputs, dtype=float))
    x = np.atleast_1d(np.asarray(state, dtype=float))
    if include_inputs:
        return np.concatenate(([1.0], a, x))
    return np.concatenate(([1.0], x))


def collect_states(model, inputs, washout, include_inputs=True):
    """Drive a reservoir through K inputs and stack regressors columnwise.

    The model is updated in place through all K rows in order; regressors
    [1; a(t); x(t)] are recorded for steps after the washout, so the
    result has K - washout columns and the model ends holding the state
    after the full sequence.
    """
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2:
        raise DimensionError("inputs must be a K x n_in matrix")
    k = inputs.shape[0]
    if not 0 <= washout < k:
        raise ValueError(f"washout must lie in [0, K), got {washout} with K={k}")
    n_in = inputs.shape[1]
    width = (1 + n_in if include_inputs else 1) + model.n_res
    out = np.empty((width, k - washout))
    for t in range(k):
        state = model.update(inputs[t])
        if t >= washout:
            out[:, t - washout] = make_regressor(inputs[t], state, include_inputs)
    return out


def fit_readout(regressors, targets, lam, include_inputs=True):
    """Ridge-fit w_out on collected regressors (D x K) and targets (N_b x K)."""
    return Readout(w_out=ridge_solve(regressors, targets, lam),
                   include_inputs=include_inputs)


def select_penalty(regressors, targets, grid=LAMBDA_GRID,
                   holdout_fraction=HOLDOUT_FRACTION):
    """Pick the ridge penalty by NMSE on a held-out tail of the training data.

    Fits on the leading 1 - holdout_fraction of the columns for each
    penalty in the grid, scores NMSE on the remaining tail, and returns
    (best penalty, {penalty: score}). Ties go to the smaller penalty.
    """
    regressors = np.asarray(regressors, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if not grid:
        raise ValueError("penalty grid must be non-empty")
    k = regressors.shape[1]
    # NMSE needs at least two held-out samples
    n_hold = max(2, round(holdout_fraction * k))
    n_fit = k - n_hold
    if n_fit < 1:
        raise ValueError("not enough samples to hold out a validation tail")
    scores = {}
    best = None
    for lam in sorted(grid):
        w = ridge_solve(regressors[:, :n_fit], targets[:, :n_fit], lam)
        scores[lam] = nmse(targets[:, n_fit:].T, (w @ regressors[:, n_fit:]).T)
        if best is None or scores[lam] < scores[best]:
            best = lam
    return best, scores
