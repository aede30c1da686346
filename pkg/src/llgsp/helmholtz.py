"""Solvers for ``(I - c Lap_h) u = b`` with homogeneous Neumann boundaries.

The cell-centred Neumann Laplacian is diagonalised by the type-II cosine
transform, so the direct solve is a transform, a pointwise division by
``1 - c lambda_k`` and an inverse transform.  Conjugate gradients is kept as
an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft
from scipy.sparse.linalg import LinearOperator, cg

from .grid import Grid, laplacian


class SolverConvergenceError(RuntimeError):
    """CG did not reach its tolerance within the iteration cap."""


@dataclass(frozen=True)
class HelmholtzOperator:
    """The shifted operator ``I - shift * Lap_h`` on ``grid``.

    Symmetric positive definite for ``shift >= 0`` (every eigenvalue is
    ``1 - shift * lambda_k >= 1``).
    """

    grid: Grid
    shift: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.shift) or self.shift < 0:
            raise ValueError(f"Helmholtz shift must be finite and non-negative, got {self.shift}")

    def apply(self, u: np.ndarray) -> np.ndarray:
        if self.shift == 0.0:
            return np.array(u, dtype=float)
        return u - self.shift * laplacian(u, self.grid)

    @property
    def symbol(self) -> np.ndarray:
        return 1.0 - self.shift * self.grid.laplacian_eigenvalues


def solve_dct(op: HelmholtzOperator, b: np.ndarray) -> np.ndarray:
    """Direct solve by cosine-transform diagonalisation."""
    b = np.asarray(b, dtype=float)
    op.grid.check(b)
    if op.shift == 0.0:
        return b.copy()
    bhat = scipy.fft.dctn(b, type=2, norm="ortho")
    return scipy.fft.idctn(bhat / op.symbol, type=2, norm="ortho")


def solve_cg(op: HelmholtzOperator, b: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Conjugate-gradient solve with ``||b - A u|| <= tol * ||b||``.

    Raises
    ------
    SolverConvergenceError
        If ``10 * grid.size`` iterations are not enough.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    b = np.asarray(b, dtype=float)
    op.grid.check(b)
    shape = b.shape
    if not np.any(b):
        return np.zeros(shape)
    n = b.size
    A = LinearOperator((n, n), matvec=lambda x: op.apply(x.reshape(shape)).ravel(), dtype=float)
    u, info = cg(A, b.ravel(), rtol=tol, atol=0.0, maxiter=10 * n)
    if info != 0:
        raise SolverConvergenceError(f"CG stopped with info={info} after {10 * n} iterations")
    return u.reshape(shape)


def solve_vector(op: HelmholtzOperator, b: np.ndarray) -> np.ndarray:
    """Apply :func:`solve_dct` to each component of a ``(3, ...)`` array."""
    b = np.asarray(b, dtype=float)
    op.grid.check(b, components=b.shape[0])
    if op.shift == 0.0:
        return b.copy()
    axes = tuple(range(1, b.ndim))
    bhat = scipy.fft.dctn(b, type=2, norm="ortho", axes=axes)
    return scipy.fft.idctn(bhat / op.symbol, type=2, norm="ortho", axes=axes)
