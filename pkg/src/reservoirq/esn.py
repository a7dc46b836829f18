"""Echo state network: sparse random reservoir with tanh units.

The reservoir matrix is sampled at a fixed density and rescaled so its
spectral radius hits a target below one, which empirically gives the
network fading memory: states forget their initial condition under a
common input drive. Only the readout (elsewhere) is ever trained.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, GenerationError
from .numerics import spectral_radius
from .textio import matrix_lines, parse_matrix

RESAMPLE_ATTEMPTS = 10


@dataclass
class EsnModel:
    """Input weights, recurrent weights, and the mutable state vector."""

    w_in: np.ndarray   # (n_res, 1 + n_in), column 0 multiplies the constant 1
    w_res: np.ndarray  # (n_res, n_res)
    state: np.ndarray = field(default=None)

    def __post_init__(self):
        self.w_in = np.asarray(self.w_in, dtype=float)
        self.w_res = np.asarray(self.w_res, dtype=float)
        if self.w_res.ndim != 2 or self.w_res.shape[0] != self.w_res.shape[1]:
            raise DimensionError("w_res must be square")
        if self.w_in.ndim != 2 or self.w_in.shape[0] != self.w_res.shape[0]:
            raise DimensionError("w_in must have one row per reservoir unit")
        if self.w_in.shape[1] < 1:
            raise DimensionError("w_in needs at least the bias column")
        if self.state is None:
            self.state = np.zeros(self.n_res)
        else:
            self.state = np.asarray(self.state, dtype=float).copy()
            if self.state.shape != (self.n_res,):
                raise DimensionError(f"state must have shape ({self.n_res},)")

    @property
    def n_res(self):
        return self.w_res.shape[0]

    @property
    def n_in(self):
        return self.w_in.shape[1] - 1

    @classmethod
    def random(cls, n_in, n_res, density, target_rho, rng,
               weight_lo=-0.5, weight_hi=0.5, bias_fixed_to_one=False):
        """Sample a reservoir at the given density and spectral radius.

        Exactly round(density * n_res^2) entries of w_res are nonzero,
        placed uniformly at random, with values drawn uniformly from
        [weight_lo, weight_hi] and then rescaled so the spectral radius
        equals target_rho. Draws that land on a nilpotent support (radius
        zero, possible at tiny densities) are resampled a few times.

        With bias_fixed_to_one the bias column of w_in is pinned to 1
        instead of drawn, which reads the constant input as having unit
        weights.
        """
        if n_res < 1 or n_in < 0:
            raise ValueError("n_res must be >= 1 and n_in >= 0")
        if not 0.0 < density <= 1.0:
            raise ValueError("density must lie in (0, 1]")
        if target_rho <= 0:
            raise ValueError("target_rho must be positive")
        nnz = round(density * n_res * n_res)
        if nnz < 1:
            raise ValueError("density too small: no nonzero entries at this size")
        for _ in range(RESAMPLE_ATTEMPTS):
            support = rng.choice(n_res * n_res, size=nnz, replace=False)
            values = rng.uniform(weight_lo, weight_hi, nnz)
            w_res = np.zeros(n_res * n_res)
            w_res[support] = values
            w_res = w_res.reshape(n_res, n_res)
            rho = spectral_radius(w_res)
            if rho > 0.0:
                break
        else:
            raise GenerationError(
                f"sampled reservoir had zero spectral radius {RESAMPLE_ATTEMPTS} times")
        w_res *= target_rho / rho
        w_in = rng.uniform(weight_lo, weight_hi, (n_res, 1 + n_in))
        if bias_fixed_to_one:
            w_in[:, 0] = 1.0
        return cls(w_in=w_in, w_res=w_res)

    def update(self, inputs):
        """Advance the state: x <- tanh(w_in [1; a] + w_res x)."""
        a = np.atleast_1d(np.asarray(inputs, dtype=float))
        if a.shape != (self.n_in,):
            raise DimensionError(f"expected input of shape ({self.n_in},), got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("inputs must be finite")
        drive = self.w_in @ np.concatenate(([1.0], a)) + self.w_res @ self.state
        self.state = np.tanh(drive)
        return self.state.copy()

    def reset(self):
        """Zero the state; weights are untouched."""
        self.state = np.zeros(self.n_res)

    def copy(self):
        return EsnModel(w_in=self.w_in.copy(), w_res=self.w_res.copy(),
                        state=self.state.copy())

    def to_text(self):
        lines = [f"esn {self.n_in} {self.n_res}"]
        lines += matrix_lines(self.w_in)
        lines += matrix_lines(self.w_res)
        lines += matrix_lines(self.state)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
        head = lines[0].split()
        if len(head) != 3 or head[0] != "esn":
            raise ValueError("expected header 'esn <n_in> <n_res>'")
        n_in, n_res = int(head[1]), int(head[2])
        w_in = parse_matrix(lines[1:1 + n_res], n_res, 1 + n_in, 2)
        w_res = parse_matrix(lines[1 + n_res:1 + 2 * n_res], n_res, n_res, 2 + n_res)
        state = parse_matrix(lines[1 + 2 * n_res:2 + 2 * n_res], 1, n_res, 2 + 2 * n_res)[0]
        return cls(w_in=w_in, w_res=w_res, state=state)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_text(fh.read())
