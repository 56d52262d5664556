"""Spectral radius of a nonnegative matrix by shifted power iteration.

Reducible matrices are split into strongly connected components first.
For a nonnegative irreducible ``A`` and a strictly positive vector ``x`` the
Collatz-Wielandt ratios ``(Bx)_i / x_i`` bracket the Perron root of
``B = A + I``, which is ``rho(A) + 1``.  The shift keeps ``x`` positive and
removes the periodicity that stalls plain power iteration on cyclic
transition matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DomainError

__all__ = ["SpectralEstimate", "spectral_radius", "gelfand_bound"]

MAX_DIM = 512


@dataclass(frozen=True)
class SpectralEstimate:
    rho: float
    lower: float
    upper: float
    iterations: int
    converged: bool
    gelfand: float
    method: str = "power"

    @property
    def reduced_accuracy(self) -> bool:
        return not self.converged

    def __float__(self) -> float:
        return self.rho


def gelfand_bound(A: np.ndarray, squarings: int = 10) -> float:
    """``||A^n||^(1/n)`` with ``n = 2**squarings`` (infinity norm, rescaled to avoid overflow)."""
    M = np.array(A, dtype=float)
    log_scale = 0.0
    for _ in range(squarings):
        s = np.abs(M).sum(axis=1).max()
        if s == 0:
            return 0.0
        M = M / s
        log_scale = 2 * (log_scale + np.log(s))
        M = M @ M
    s = np.abs(M).sum(axis=1).max()
    if s == 0:
        return 0.0
    return float(np.exp((log_scale + np.log(s)) / 2**squarings))


def _block_radius(A: np.ndarray, rtol: float, max_iter: int):
    # irreducible block: A + I is primitive, so the bracket closes
    n = A.shape[0]
    if n == 1:
        return float(A[0, 0]), float(A[0, 0]), 0, True
    scale = float(A.sum(axis=1).max())
    B = A / scale + np.eye(n)
    x = np.ones(n)
    lower = upper = 0.0
    for it in range(1, max_iter + 1):
        y = B @ x
        r = y / x
        lower = (float(r.min()) - 1.0) * scale
        upper = (float(r.max()) - 1.0) * scale
        x = y / y.max()
        if upper - lower <= rtol * upper:
            return lower, upper, it, True
    return max(lower, 0.0), upper, max_iter, False


def _dense_radius(A: np.ndarray) -> float:
    # fallback for blocks whose entries span too many scales for the shift
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def spectral_radius(A, rtol: float = 1e-8, max_iter: int = 20_000) -> SpectralEstimate:
    """Perron root of a nonnegative square matrix.

    The matrix is split into strongly connected components; on each the
    Collatz-Wielandt bracket of ``A + I`` is iterated until it is narrower
    than ``rtol`` relative to the estimate.  A block that fails to close
    falls back to a dense eigenvalue solve (``method="dense"``); ``converged``
    is False only if that is impossible too.  The Gelfand estimate is
    attached as a cross check.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("spectral_radius needs a square matrix")
    n = A.shape[0]
    if n == 0:
        raise DomainError("empty matrix")
    if n > MAX_DIM:
        raise DomainError(f"matrix dimension {n} exceeds {MAX_DIM}")
    if np.any(A < 0) or not np.all(np.isfinite(A)):
        raise DomainError("matrix must be finite and entrywise nonnegative")
    gel = gelfand_bound(A)
    n_comp, labels = connected_components(csr_matrix(A > 0), directed=True, connection="strong")
    lower = upper = 0.0
    iters = 0
    converged = True
    method = "power"
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        block = A[np.ix_(idx, idx)]
        if not block.any():
            continue
        lo, hi, it, ok = _block_radius(block, rtol, max_iter)
        if not ok:
            try:
                lo = hi = _dense_radius(block)
                ok, method = True, "dense"
            except np.linalg.LinAlgError:
                pass
        iters = max(iters, it)
        converged &= ok
        lower = max(lower, lo)
        upper = max(upper, hi)
    rho = 0.5 * (lower + upper) if converged else upper
    return SpectralEstimate(rho, lower, upper, iters, converged, gel, method)
