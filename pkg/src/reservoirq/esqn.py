"""Echo state queueing network: a reservoir whose state is a load vector.

Each reservoir unit is a spiking queue neuron; its state is the queueing
load rho_u rather than a tanh activation. One time step applies the
stationary load map once, reading only the previous state:

    rho_u <- (sum_v (a_v / r_v) w+_in[u, v] + sum_v' rho_v' w+_res[u, v'])
             -----------------------------------------------------------
             (r_u + sum_v (a_v / r_v) w-_in[u, v] + sum_v' rho_v' w-_res[u, v'])

Inputs a are nonnegative spike arrival rates (data is rescaled to [0, 1]
upstream) and a_v / r_v is the load of input neuron v viewed as an M/M/1
queue. All weights are nonnegative because they are routing rates. The
map is applied literally, without clamping loads at one; updates where
some load exceeds one are tallied in ``overload_steps`` as a diagnostic.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError
from .textio import matrix_lines, parse_matrix

_BLOCKS = ("w_plus_in", "w_minus_in", "w_plus_res", "w_minus_res")


@dataclass
class EsqnModel:
    """Four nonnegative weight blocks, firing rates, and the load state."""

    w_plus_in: np.ndarray    # (n_res, n_in) excitatory input weights
    w_minus_in: np.ndarray   # (n_res, n_in) inhibitory input weights
    w_plus_res: np.ndarray   # (n_res, n_res) excitatory recurrences
    w_minus_res: np.ndarray  # (n_res, n_res) inhibitory recurrences
    rates_in: np.ndarray     # (n_in,) input-neuron firing rates
    rates_res: np.ndarray    # (n_res,) reservoir firing rates
    state: np.ndarray = field(default=None)
    overload_steps: int = 0  # updates in which some load exceeded 1

    def __post_init__(self):
        for name in (*_BLOCKS, "rates_in", "rates_res"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))
        n_res, n_in = self.w_plus_in.shape if self.w_plus_in.ndim == 2 else (0, 0)
        if self.w_plus_in.ndim != 2:
            raise DimensionError("w_plus_in must be 2-d")
        if self.w_minus_in.shape != (n_res, n_in):
            raise DimensionError("w_minus_in must match w_plus_in")
        for name in ("w_plus_res", "w_minus_res"):
            if getattr(self, name).shape != (n_res, n_res):
                raise DimensionError(f"{name} must have shape ({n_res}, {n_res})")
        if self.rates_in.shape != (n_in,) or self.rates_res.shape != (n_res,):
            raise DimensionError("rate vectors must match the weight blocks")
        for name in _BLOCKS:
            if np.any(getattr(self, name) < 0):
                raise ValueError(f"{name} must be nonnegative (weights are rates)")
        if np.any(self.rates_in <= 0) or np.any(self.rates_res <= 0):
            raise ValueError("firing rates must be strictly positive")
        if self.state is None:
            self.state = np.zeros(n_res)
        else:
            self.state = np.asarray(self.state, dtype=float).copy()
            if self.state.shape != (n_res,):
                raise DimensionError(f"state must have shape ({n_res},)")
            if np.any(self.state < 0):
                raise DomainError("loads must be nonnegative")

    @property
    def n_res(self):
        return self.w_plus_res.shape[0]

    @property
    def n_in(self):
        return self.w_plus_in.shape[1]

    @classmethod
    def random(cls, n_in, n_res, rng, weight_lo=0.0, weight_hi=0.2,
               density=1.0, rate=1.0):
        """Draw all four weight blocks uniformly from [weight_lo, weight_hi].

        The initial load vector is uniform on [0, 1] and every firing rate
        is ``rate``. Blocks are drawn in a fixed order (excitatory input,
        inhibitory input, excitatory recurrent, inhibitory recurrent, then
        state) so a seed pins the model. ``density`` < 1 keeps only that
        fraction of each recurrent block, chosen uniformly; the reference
        configuration is dense.
        """
        if n_in < 1 or n_res < 1:
            raise ValueError("n_in and n_res must be >= 1")
        if weight_lo < 0:
            raise ValueError("weight_lo must be nonnegative (weights are rates)")
        if weight_lo > weight_hi:
            raise ValueError(f"empty interval: weight_lo={weight_lo} > weight_hi={weight_hi}")
        if not 0.0 < density <= 1.0:
            raise ValueError("density must lie in (0, 1]")
        if rate <= 0:
            raise ValueError("rate must be positive")
        w_plus_in = rng.uniform(weight_lo, weight_hi, (n_res, n_in))
        w_minus_in = rng.uniform(weight_lo, weight_hi, (n_res, n_in))
        w_plus_res = rng.uniform(weight_lo, weight_hi, (n_res, n_res))
        w_minus_res = rng.uniform(weight_lo, weight_hi, (n_res, n_res))
        if density < 1.0:
            nnz = max(1, round(density * n_res * n_res))
            for block in (w_plus_res, w_minus_res):
                keep = rng.choice(n_res * n_res, size=nnz, replace=False)
                mask = np.zeros(n_res * n_res)
                mask[keep] = 1.0
                block *= mask.reshape(n_res, n_res)
        state = rng.uniform(0.0, 1.0, n_res)
        return cls(w_plus_in=w_plus_in, w_minus_in=w_minus_in,
                   w_plus_res=w_plus_res, w_minus_res=w_minus_res,
                   rates_in=np.full(n_in, float(rate)),
                   rates_res=np.full(n_res, float(rate)),
                   state=state)

    def update(self, inputs):
        """Apply the load map once, simultaneously across units.

        The right-hand side reads only the previous state vector; no unit
        sees another unit's already-updated load within the same step.
        """
        a = np.atleast_1d(np.asarray(inputs, dtype=float))
        if a.shape != (self.n_in,):
            raise DimensionError(f"expected input of shape ({self.n_in},), got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("inputs must be finite")
        if np.any(a < 0):
            raise DomainError("inputs are spike rates and must be nonnegative")
        x = a / self.rates_in
        numer = self.w_plus_in @ x + self.w_plus_res @ self.state
        denom = self.rates_res + self.w_minus_in @ x + self.w_minus_res @ self.state
        self.state = numer / denom
        if np.any(self.state > 1.0):
            self.overload_steps += 1
        return self.state.copy()

    def reset(self, rng=None, state=None):
        """Replace the load vector; weights are untouched.

        Pass ``rng`` to redraw uniform [0, 1] loads, or ``state`` to set
        them explicitly (scalar or vector, nonnegative).
        """
        if (rng is None) == (state is None):
            raise ValueError("pass exactly one of rng or state")
        if rng is not None:
            self.state = rng.uniform(0.0, 1.0, self.n_res)
            return
        new = np.asarray(state, dtype=float)
        if new.ndim == 0:
            new = np.full(self.n_res, float(new))
        if new.shape != (self.n_res,):
            raise DimensionError(f"state must have shape ({self.n_res},)")
        if not np.all(np.isfinite(new)) or np.any(new < 0):
            raise DomainError("loads must be finite and nonnegative")
        self.state = new.copy()

    def copy(self):
        return EsqnModel(w_plus_in=self.w_plus_in.copy(), w_minus_in=self.w_minus_in.copy(),
                         w_plus_res=self.w_plus_res.copy(), w_minus_res=self.w_minus_res.copy(),
                         rates_in=self.rates_in.copy(), rates_res=self.rates_res.copy(),
                         state=self.state.copy(), overload_steps=self.overload_steps)

    def to_text(self):
        lines = [f"esqn {self.n_in} {self.n_res}"]
        for name in _BLOCKS:
            lines += matrix_lines(getattr(self, name))
        lines += matrix_lines(self.rates_in)
        lines += matrix_lines(self.rates_res)
        lines += matrix_lines(self.state)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
        head = lines[0].split()
        if len(head) != 3 or head[0] != "esqn":
            raise ValueError("expected header 'esqn <n_in> <n_res>'")
        n_in, n_res = int(head[1]), int(head[2])
        pos = 1
        blocks = {}
        for name, cols in (("w_plus_in", n_in), ("w_minus_in", n_in),
                           ("w_plus_res", n_res), ("w_minus_res", n_res)):
            blocks[name] = parse_matrix(lines[pos:pos + n_res], n_res, cols, pos + 1)
            pos += n_res
        rates_in = parse_matrix(lines[pos:pos + 1], 1, n_in, pos + 1)[0]
        rates_res = parse_matrix(lines[pos + 1:pos + 2], 1, n_res, pos + 2)[0]
        state = parse_matrix(lines[pos + 2:pos + 3], 1, n_res, pos + 3)[0]
        return cls(rates_in=rates_in, rates_res=rates_res, state=state, **blocks)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_text(fh.read())
