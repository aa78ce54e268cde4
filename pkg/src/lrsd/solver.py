"""Low-rank + sparse decomposition of a noisy matrix.

Minimizes  0.5*||D - X - E||_F^2 + alpha*||X||_* + beta*||E||_1  by
alternating two exact proximal steps: singular value thresholding for the
low-rank component X and elementwise soft-thresholding for the sparse
component E. The objective is jointly convex, so the alternation reaches the
unique global minimum regardless of initialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import DenseMatrix, as_array
from .numerics import median_all

MAD_TO_SIGMA = 1.48          # normal-consistency factor for the MAD scale estimate
BETA_RATIO = 2.0             # beta = BETA_RATIO * alpha / sqrt(larger dimension)
DETECTION_SCALE = 0.3        # auto threshold T = DETECTION_SCALE * sigma_hat
RANK_TOL = 1e-9              # singular values below RANK_TOL*s1 count as zero
_POLISH_ITERS = 2            # extra sweeps after the objective criterion fires


class DegenerateInputError(ValueError):
    """Raised when auto-parameterization is impossible (e.g. constant input)."""


@dataclass(frozen=True)
class SolverConfig:
    alpha: float
    beta: float
    max_iterations: int = 500
    rel_tolerance: float = 1e-7
    detection_threshold: float | str = "auto"

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.rel_tolerance <= 0:
            raise ValueError("rel_tolerance must be positive")
        if self.detection_threshold != "auto" and self.detection_threshold < 0:
            raise ValueError("detection_threshold must be >= 0 or 'auto'")


@dataclass(frozen=True)
class SolverResult:
    X_hat: DenseMatrix
    E_hat: DenseMatrix
    objective_trace: tuple[float, ...]
    iterations_used: int
    converged: bool
    rank_of_X: int
    nnz_of_E: int


def _check_same_shape(*arrays):
    shapes = {a.shape for a in arrays}
    if len(shapes) > 1:
        raise ValueError(f"shape mismatch: {sorted(shapes)}")


def objective(D, X, E, alpha: float, beta: float) -> float:
    """Value of 0.5*||D-X-E||_F^2 + alpha*||X||_* + beta*||E||_1."""
    d, x, e = as_array(D), as_array(X), as_array(E)
    _check_same_shape(d, x, e)
    nuc = np.linalg.svd(x, compute_uv=False).sum()
    return float(0.5 * ((d - x - e) ** 2).sum() + alpha * nuc + beta * np.abs(e).sum())


def svt(M, lam: float) -> np.ndarray:
    """Singular value thresholding: shrink each singular value by lam.

    Exact proximal operator of lam*||.||_* (the minimizer of
    0.5*||M - X||_F^2 + lam*||X||_*).
    """
    if lam < 0:
        raise ValueError("svt threshold must be >= 0")
    a = as_array(M)
    U, s, Vt = np.linalg.svd(a, full_matrices=False)
    return (U * np.maximum(s - lam, 0.0)) @ Vt


def soft_threshold(M, beta: float) -> np.ndarray:
    """Elementwise shrinkage sign(m)*max(|m|-beta, 0); the l1 prox."""
    if beta < 0:
        raise ValueError("soft threshold must be >= 0")
    a = as_array(M)
    return np.sign(a) * np.maximum(np.abs(a) - beta, 0.0)


def estimate_sigma(D) -> float:
    """Robust noise scale: 1.48 * median(|D - median(D)|).

    Returns 0 for constant input; callers doing auto-parameterization must
    treat that as degenerate.
    """
    a = as_array(D)
    return MAD_TO_SIGMA * float(np.median(np.abs(a - median_all(a))))


def default_params(n: int, p: int, sigma: float) -> tuple[float, float]:
    """Default (alpha, beta) from the matrix shape and the noise scale.

    alpha = (sqrt(n) + sqrt(p)) * sigma, the expected spectral norm of an
    n x p Gaussian noise matrix; beta = 2*alpha/sqrt(m) with m the larger
    dimension.
    """
    if n < 1 or p < 1:
        raise ValueError("matrix dimensions must be >= 1")
    if sigma <= 0:
        raise DegenerateInputError(
            "noise scale estimate is not positive; supply alpha and beta explicitly"
        )
    alpha = (math.sqrt(n) + math.sqrt(p)) * sigma
    beta = BETA_RATIO * alpha / math.sqrt(max(n, p))
    return alpha, beta


def auto_threshold(sigma: float) -> float:
    """Default detection threshold, proportional to the noise scale."""
    if sigma <= 0:
        raise DegenerateInputError("cannot derive a detection threshold from sigma <= 0")
    return DETECTION_SCALE * sigma


def auto_config(D, **overrides) -> SolverConfig:
    """SolverConfig with alpha, beta and threshold resolved from the data."""
    a = as_array(D)
    sigma = estimate_sigma(a)
    alpha, beta = default_params(a.shape[0], a.shape[1], sigma)
    defaults = dict(alpha=alpha, beta=beta, detection_threshold=auto_threshold(sigma))
    defaults.update(overrides)
    return SolverConfig(**defaults)


def solve(D, config: SolverConfig, x0=None, e0=None) -> SolverResult:
    """Alternate SVT and soft-thresholding from X = E = 0 until convergence.

    Convergence: relative objective decrease below config.rel_tolerance.
    A couple of extra sweeps are run after the criterion first fires so the
    returned pair also satisfies the first-order optimality conditions
    tightly; the trace stays non-increasing throughout. Hitting the
    iteration cap is reported via converged=False, not an error.
    """
    d = as_array(D)
    labels = {}
    if isinstance(D, DenseMatrix):
        labels = dict(row_labels=D.row_labels, col_labels=D.col_labels)
    X = np.zeros_like(d) if x0 is None else np.array(as_array(x0), dtype=float)
    E = np.zeros_like(d) if e0 is None else np.array(as_array(e0), dtype=float)
    _check_same_shape(d, X, E)

    alpha, beta = config.alpha, config.beta
    F = objective(d, X, E, alpha, beta)
    trace = [F]
    s_thr = np.linalg.svd(X, compute_uv=False)
    converged = False
    iterations = 0
    settle = 0
    for _ in range(config.max_iterations):
        iterations += 1
        U, s, Vt = np.linalg.svd(d - E, full_matrices=False)
        s_thr = np.maximum(s - alpha, 0.0)
        X_new = (U * s_thr) @ Vt
        E_new = soft_threshold(d - X_new, beta)
        F_new = float(
            0.5 * ((d - X_new - E_new) ** 2).sum()
            + alpha * s_thr.sum()
            + beta * np.abs(E_new).sum()
        )
        stalled = np.array_equal(X_new, X) and np.array_equal(E_new, E)
        X, E = X_new, E_new
        trace.append(F_new)
        if (F - F_new) / max(F, 1.0) < config.rel_tolerance:
            converged = True
            settle += 1
            if stalled or settle > _POLISH_ITERS:
                break
        else:
            converged = False
            settle = 0
        F = F_new

    s1 = s_thr[0] if s_thr.size else 0.0
    rank = int((s_thr > RANK_TOL * max(s1, RANK_TOL)).sum()) if s1 > 0 else 0
    return SolverResult(
        X_hat=DenseMatrix(X, **labels),
        E_hat=DenseMatrix(E, **labels),
        objective_trace=tuple(trace),
        iterations_used=iterations,
        converged=converged,
        rank_of_X=rank,
        nnz_of_E=int(np.count_nonzero(E)),
    )


def optimality_residual(D, X, E, alpha: float, beta: float) -> float:
    """Violation of the first-order conditions at (X, E); zero iff optimal.

    With R = D - X - E and X = U diag(s) V^T on its positive singular space,
    optimality requires U^T R V = alpha*I, R to vanish on the mixed
    row/column spaces of X, ||R||_2 <= alpha off X's singular spaces, and
    entrywise |R| <= beta where E = 0 with R = beta*sign(E) where E != 0.
    Returns the largest violation among these conditions.
    """
    d, x, e = as_array(D), as_array(X), as_array(E)
    _check_same_shape(d, x, e)
    R = d - x - e

    U, s, Vt = np.linalg.svd(x, full_matrices=False)
    s1 = s[0] if s.size else 0.0
    r = int((s > RANK_TOL * max(s1, RANK_TOL)).sum()) if s1 > 0 else 0
    terms = []
    if r > 0:
        U1, V1t = U[:, :r], Vt[:r, :]
        core = U1.T @ R @ V1t.T
        terms.append(np.linalg.norm(core - alpha * np.eye(r)))
        terms.append(np.linalg.norm(U1.T @ R - core @ V1t))
        terms.append(np.linalg.norm(R @ V1t.T - U1 @ core))
        R_perp = R - U1 @ (U1.T @ R) - (R @ V1t.T) @ V1t + U1 @ core @ V1t
    else:
        R_perp = R
    spec = np.linalg.svd(R_perp, compute_uv=False)
    terms.append(max(0.0, float(spec[0]) - alpha) if spec.size else 0.0)

    zero = e == 0
    viol = np.where(zero, np.maximum(np.abs(R) - beta, 0.0), np.abs(R - beta * np.sign(e)))
    terms.append(float(viol.max()) if viol.size else 0.0)
    return float(max(terms))


def detect(result: SolverResult, T: float) -> np.ndarray:
    """Boolean mask of entries reported as signal: |X| > T or |E| > T."""
    if T < 0:
        raise ValueError("detection threshold must be >= 0")
    return (np.abs(result.X_hat.values) > T) | (np.abs(result.E_hat.values) > T)
