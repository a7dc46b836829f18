"""Steady-state solver for random neural networks (G-networks).

A network of N spiking queue-like neurons exchanges excitatory and
inhibitory Poisson spike streams. Neuron u fires at rate ``rates[u]``
while its potential is positive; ``w_plus[u, v]`` / ``w_minus[u, v]``
are the excitatory / inhibitory spike rates routed from v to u, and
``lambda_plus`` / ``lambda_minus`` are external arrival rates. In
equilibrium the activity rates (loads) satisfy

    rho_u = T+_u / (rates_u + T-_u),
    T+_u  = lambda+_u + sum_v rho_v w+_{u,v},
    T-_u  = lambda-_u + sum_v rho_v w-_{u,v},

and the network is stable when every load stays below one. The solver
iterates this map with adaptive damping from rho = 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError
from .textio import matrix_lines, parse_matrix, parse_row

ALPHA_FLOOR = 2.0 ** -20
OVERLOAD_PATIENCE = 100


@dataclass(frozen=True)
class RandnnSpec:
    """Immutable description of one random neural network.

    All rates are nonnegative, firing rates strictly positive, and at
    least one external excitatory rate must be positive (otherwise no
    neuron can ever become active).
    """

    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    w_plus: np.ndarray
    w_minus: np.ndarray
    rates: np.ndarray

    def __post_init__(self):
        for name in ("lambda_plus", "lambda_minus", "rates"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        for name in ("w_plus", "w_minus"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.lambda_plus.shape[0]
        if self.lambda_plus.ndim != 1 or n == 0:
            raise DimensionError("lambda_plus must be a non-empty vector")
        for name in ("lambda_minus", "rates"):
            if getattr(self, name).shape != (n,):
                raise DimensionError(f"{name} must have shape ({n},)")
        for name in ("w_plus", "w_minus"):
            if getattr(self, name).shape != (n, n):
                raise DimensionError(f"{name} must have shape ({n}, {n})")
        for name in ("lambda_plus", "lambda_minus", "w_plus", "w_minus", "rates"):
            arr = getattr(self, name)
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
            if np.any(arr < 0):
                raise ValueError(f"{name} must be nonnegative")
        if np.any(self.rates <= 0):
            raise ValueError("firing rates must be strictly positive")
        if self.lambda_plus.sum() <= 0:
            raise ValueError("at least one external excitatory rate must be positive")

    @property
    def n(self):
        return self.lambda_plus.shape[0]

    def routing_slack(self):
        """Per-neuron slack rates[v] - sum_u (w+ + w-)[u, v].

        For weights derived from routing probabilities the slack equals
        rates[v] times the departure probability, so it is nonnegative.
        """
        return self.rates - (self.w_plus.sum(axis=0) + self.w_minus.sum(axis=0))

    def routing_consistent(self, tol=1e-9):
        """Whether every column respects the routing budget (within tol)."""
        return bool(np.all(self.routing_slack() >= -tol * np.maximum(self.rates, 1.0)))


@dataclass(frozen=True)
class SteadyState:
    """A fixed point of the load equations plus its stability verdict."""

    rho: np.ndarray
    stable: bool
    iterations: int


def _load_map(spec, rho):
    t_plus = spec.lambda_plus + spec.w_plus @ rho
    t_minus = spec.lambda_minus + spec.w_minus @ rho
    return t_plus / (spec.rates + t_minus)


def residual(spec, rho):
    """max_u |rho_u - g_u(rho)| where g is the load map."""
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (spec.n,):
        raise DimensionError(f"rho must have shape ({spec.n},), got {rho.shape}")
    return float(np.max(np.abs(rho - _load_map(spec, rho))))


def solve_steady_state(spec, tol=1e-12, max_iter=10_000):
    """Fixed point of the load equations by damped successive substitution.

    Starts from rho = 0 with full steps; the step size is halved whenever
    successive updates reverse direction (oscillation around the fixed
    point). If some load sits at or above one for OVERLOAD_PATIENCE
    consecutive iterations, the network is reported unstable instead of
    erroring. Exhausting max_iter raises ConvergenceError carrying the
    last iterate.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rho = np.zeros(spec.n)
    alpha = 1.0
    prev_step = None
    overloaded = 0
    for iteration in range(int(max_iter)):
        g = _load_map(spec, rho)
        res = float(np.max(np.abs(rho - g)))
        if res < tol:
            return SteadyState(rho=rho, stable=bool(np.all(rho < 1.0)), iterations=iteration)
        delta = g - rho
        if prev_step is not None and float(delta @ prev_step) < 0.0:
            alpha = max(alpha / 2.0, ALPHA_FLOOR)
        step = alpha * delta
        rho = rho + step
        prev_step = step
        overloaded = overloaded + 1 if np.any(rho >= 1.0) else 0
        if overloaded >= OVERLOAD_PATIENCE:
            return SteadyState(rho=rho, stable=False, iterations=iteration + 1)
    raise ConvergenceError(
        f"load equations did not reach tol={tol} within {max_iter} iterations",
        best=rho)


def save_spec(spec, path):
    """Write a spec as plain text: N, lambda+, lambda-, r, then w+ and w- rows."""
    lines = [str(spec.n)]
    lines += matrix_lines(spec.lambda_plus)
    lines += matrix_lines(spec.lambda_minus)
    lines += matrix_lines(spec.rates)
    lines += matrix_lines(spec.w_plus)
    lines += matrix_lines(spec.w_minus)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_spec(path):
    """Parse the plain-text spec format written by save_spec."""
    with open(path) as fh:
        lines = [ln for ln in (raw.strip() for raw in fh) if ln]
    if not lines:
        raise ValueError(f"{path}: empty spec file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"{path}: line 1: expected the neuron count") from None
    if n < 1:
        raise ValueError(f"{path}: neuron count must be >= 1")
    if len(lines) != 1 + 3 + 2 * n:
        raise ValueError(f"{path}: expected {1 + 3 + 2 * n} lines for N={n}, got {len(lines)}")
    lam_plus = parse_row(lines[1], n, 2)
    lam_minus = parse_row(lines[2], n, 3)
    rates = parse_row(lines[3], n, 4)
    w_plus = parse_matrix(lines[4:4 + n], n, n, 5)
    w_minus = parse_matrix(lines[4 + n:4 + 2 * n], n, n, 5 + n)
    return RandnnSpec(lambda_plus=lam_plus, lambda_minus=lam_minus,
                      w_plus=w_plus, w_minus=w_minus, rates=rates)
