"""Shared numerical primitives: SVD, order statistics, inverse normal CDF."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .matrix import as_array


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD M = U diag(s) V^T with s sorted non-increasing."""

    U: np.ndarray            # (n, r)
    singular_values: np.ndarray  # (r,)
    V: np.ndarray            # (p, r)

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.singular_values) @ self.V.T


def svd(m) -> SvdFactors:
    """Thin SVD of a dense matrix. Deterministic for a fixed input."""
    a = as_array(m)
    U, s, Vt = np.linalg.svd(a, full_matrices=False)
    return SvdFactors(U=U, singular_values=s, V=Vt.T)


def median_all(m) -> float:
    """Median over all entries; mid-mean convention for even counts."""
    a = as_array(m)
    if a.size == 0:
        raise ValueError("median of an empty matrix is undefined")
    return float(np.median(a))


def inverse_normal_cdf(q: float) -> float:
    """Quantile function of the standard normal, Phi^{-1}(q), for 0 < q < 1."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"inverse_normal_cdf requires 0 < q < 1, got {q}")
    return float(special.ndtri(q))
