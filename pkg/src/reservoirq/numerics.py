"""Seeded randomness, spectral radius and the ridge solver.

All experiment randomness flows through numpy's PCG64 generator (a
permuted-congruential generator with published constants and
platform-independent integer arithmetic), so a seed pins every weight
draw bit-exactly. Independent substreams are derived from a master seed
and an integer path, never by splitting one sequential stream, which
keeps trial results independent of how many other trials run.
"""

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, eigs

from .errors import ConvergenceError, DimensionError, SingularSystemError

# Above this order, a dense eigensolve stops being the cheap option and
# the Arnoldi path takes over.
DENSE_EIG_LIMIT = 512


def seeded_rng(seed):
    """Return a PCG64 generator seeded with ``seed``."""
    return np.random.default_rng(seed)


def substream_rng(master_seed, *path):
    """Return an independent generator for (master_seed, *path).

    The path is hashed through numpy's SeedSequence, so distinct paths give
    statistically independent streams and the same path always gives the
    same stream.
    """
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, path)]))


def substream_seed(master_seed, *path):
    """Collapse (master_seed, *path) to a single reproducible 64-bit seed."""
    ss = np.random.SeedSequence([int(master_seed), *map(int, path)])
    return int(ss.generate_state(1, np.uint64)[0])


def uniform(rng, lo, hi, n):
    """Draw ``n`` values from the half-open interval [lo, hi).

    A degenerate interval (lo == hi) yields the constant lo. lo > hi is
    rejected.
    """
    if lo > hi:
        raise ValueError(f"empty interval: lo={lo} > hi={hi}")
    return rng.uniform(lo, hi, int(n))


def spectral_radius(m, tol=1e-10, max_iter=10_000):
    """Largest eigenvalue magnitude of a square matrix.

    Small matrices (n <= DENSE_EIG_LIMIT) use a dense eigensolve, which
    handles complex dominant pairs exactly. Larger matrices fall back to
    a deterministic Arnoldi iteration; if it fails to converge within
    ``max_iter`` a ConvergenceError carrying the best estimate is raised.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not m.any():
        return 0.0
    n = m.shape[0]
    if n <= DENSE_EIG_LIMIT:
        return float(np.max(np.abs(np.linalg.eigvals(m))))
    try:
        vals = eigs(m, k=1, which="LM", v0=np.ones(n), tol=tol,
                    maxiter=int(max_iter), return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        best = float(np.max(np.abs(exc.eigenvalues))) if np.size(exc.eigenvalues) else None
        raise ConvergenceError(
            f"spectral radius did not converge within {max_iter} iterations",
            best=best) from exc
    return float(np.abs(vals[0]))


def ridge_solve(regressors, targets, lam):
    """Solve min_W sum_k ||t_k - W z_k||^2 + lam ||W||_F^2.

    ``regressors`` is D x K (one column per sample), ``targets`` is
    N_b x K; the result W is N_b x D, i.e. W = T Z' (Z Z' + lam I)^-1.
    The symmetric positive-definite system is solved directly by Cholesky
    on the smaller of the D x D and K x K Gram matrices.
    """
    Z = np.asarray(regressors, dtype=float)
    T = np.asarray(targets, dtype=float)
    if Z.ndim != 2 or T.ndim != 2:
        raise DimensionError("regressors and targets must be 2-d matrices")
    if T.shape[1] != Z.shape[1]:
        raise DimensionError(
            f"sample counts differ: regressors K={Z.shape[1]}, targets K={T.shape[1]}")
    if Z.shape[1] < 1:
        raise DimensionError("need at least one sample column")
    if not (np.all(np.isfinite(Z)) and np.all(np.isfinite(T))):
        raise ValueError("regressors and targets must be finite")
    lam = float(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")

    d, k = Z.shape
    if lam == 0.0 and d > k:
        # fewer samples than regressors leaves the Gram rank-deficient
        raise SingularSystemError(
            "underdetermined system (K < D) with no penalty; pass a positive lambda")
    try:
        if d <= k:
            gram = Z @ Z.T
            gram[np.diag_indices_from(gram)] += lam
            factor = scipy.linalg.cho_factor(gram)
            w = scipy.linalg.cho_solve(factor, (T @ Z.T).T).T
        else:
            gram = Z.T @ Z
            gram[np.diag_indices_from(gram)] += lam
            factor = scipy.linalg.cho_factor(gram)
            # W = T (Z'Z + lam I)^-1 Z'
            w = scipy.linalg.cho_solve(factor, T.T).T @ Z.T
    except np.linalg.LinAlgError as exc:
        if lam == 0.0:
            raise SingularSystemError(
                "regressor Gram matrix is singular; pass a positive lambda") from exc
        raise
    if lam == 0.0:
        # Cholesky can slip through an exactly singular Gram on a
        # rounding-level pivot (and a consistent singular system even has
        # zero backward error), so gate the unregularized path on the
        # Gram's conditioning instead.
        if not np.all(np.isfinite(w)) or np.linalg.cond(gram) > 1e12:
            raise SingularSystemError(
                "regressor Gram matrix is numerically singular; "
                "pass a positive lambda")
    return w
