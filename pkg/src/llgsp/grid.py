"""Cell-centred grids on the unit cube with homogeneous Neumann boundaries.

Arrays are indexed ``(x, y, z)``; vector fields carry the component as a
leading axis, i.e. shape ``(3, Nx[, Ny[, Nz]])``.  Ghost cells mirror the
adjacent interior cell, which is the second-order zero-flux condition for
cell-centred nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

UNIT_TOL = 1e-12


class GridMismatchError(ValueError):
    """Raised when two fields live on different grids."""


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid on ``[0, 1]^dim`` with nodes at ``(i + 1/2) h``.

    Parameters
    ----------
    cells : tuple of int
        Number of cells along each axis; its length is the dimension.
    """

    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        cells = tuple(int(n) for n in np.atleast_1d(self.cells))
        if not 1 <= len(cells) <= 3:
            raise ValueError(f"grid dimension must be 1, 2 or 3, got {len(cells)}")
        if any(n < 1 for n in cells):
            raise ValueError(f"cell counts must be positive, got {cells}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def uniform(cls, n: int, dim: int) -> Grid:
        return cls((n,) * dim)

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cells

    @property
    def size(self) -> int:
        return int(np.prod(self.cells))

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(1.0 / n for n in self.cells)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis_nodes(self, axis: int) -> np.ndarray:
        n = self.cells[axis]
        return (np.arange(n) + 0.5) / n

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        """Broadcastable node coordinates, one array per axis."""
        return tuple(np.meshgrid(*(self.axis_nodes(a) for a in range(self.dim)),
                                 indexing="ij", sparse=True))

    @cached_property
    def laplacian_eigenvalues(self) -> np.ndarray:
        """Eigenvalues of the Neumann Laplacian in cosine-mode order.

        Mode ``k`` along an axis with ``N`` cells has eigenvalue
        ``-(4/h^2) sin^2(k pi / (2N))``; the full array is the sum over axes.
        """
        lam = np.zeros(self.shape)
        for axis, (n, h) in enumerate(zip(self.cells, self.spacing)):
            k = np.arange(n)
            lam_axis = -(4.0 / h**2) * np.sin(k * np.pi / (2 * n)) ** 2
            shape = [1] * self.dim
            shape[axis] = n
            lam = lam + lam_axis.reshape(shape)
        return lam

    def check(self, values: np.ndarray, components: int | None = None) -> None:
        expected = self.shape if components is None else (components, *self.shape)
        if values.shape != expected:
            raise GridMismatchError(f"array of shape {values.shape} does not match grid {expected}")


@dataclass(frozen=True, eq=False)
class VectorField:
    """Three-component field sampled on a grid.

    ``values`` has shape ``(3, *grid.shape)``.  Use :meth:`unit` to build a
    magnetization state, which enforces the pointwise unit-length constraint.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        self.grid.check(values, components=3)
        if not np.all(np.isfinite(values)):
            raise ValueError("vector field contains non-finite values")
        object.__setattr__(self, "values", values)

    @classmethod
    def unit(cls, grid: Grid, values: np.ndarray, tol: float = UNIT_TOL) -> VectorField:
        field = cls(grid, values)
        drift = norm_drift(field.values)
        if drift > tol:
            raise ValueError(f"field is not unit length: max | |m| - 1 | = {drift:.3e} > {tol:.1e}")
        return field

    @classmethod
    def uniform(cls, grid: Grid, vector) -> VectorField:
        v = np.asarray(vector, dtype=float).reshape((3,) + (1,) * grid.dim)
        return cls(grid, np.broadcast_to(v, (3, *grid.shape)).copy())

    def component(self, i: int) -> np.ndarray:
        return self.values[i]

    def copy(self) -> VectorField:
        return VectorField(self.grid, self.values.copy())


def _padded(u: np.ndarray, axis: int) -> np.ndarray:
    return np.concatenate([np.take(u, [0], axis=axis), u, np.take(u, [-1], axis=axis)], axis=axis)


def laplacian(u: np.ndarray, grid: Grid) -> np.ndarray:
    """Second-order Neumann Laplacian of a scalar array on ``grid``.

    Vector arrays of shape ``(3, *grid.shape)`` are handled componentwise.
    """
    u = np.asarray(u, dtype=float)
    lead = u.ndim - grid.dim
    if lead not in (0, 1) or u.shape[lead:] != grid.shape:
        raise GridMismatchError(f"array of shape {u.shape} does not match grid {grid.shape}")
    if not np.all(np.isfinite(u)):
        raise ValueError("laplacian input contains non-finite values")
    out = np.zeros_like(u)
    for axis, h in enumerate(grid.spacing):
        ax = axis + lead
        n = u.shape[ax]
        up = _padded(u, ax)
        lo = np.take(up, np.arange(0, n), axis=ax)
        hi = np.take(up, np.arange(2, n + 2), axis=ax)
        out += (lo - 2.0 * u + hi) / h**2
    return out


def gradient_sq_sum(u: np.ndarray, grid: Grid) -> float:
    """Discrete ``int |grad u|^2`` using forward differences.

    Each axis contributes its ``N - 1`` interior differences, weighted by the
    cell volume.  Works for scalar or ``(3, ...)`` vector arrays.
    """
    u = np.asarray(u, dtype=float)
    lead = u.ndim - grid.dim
    total = 0.0
    for axis, h in enumerate(grid.spacing):
        d = np.diff(u, axis=axis + lead) / h
        total += float(np.sum(d * d))
    return grid.cell_volume * total


def central_gradient(u: np.ndarray, grid: Grid) -> np.ndarray:
    """Centred differences with mirror ghosts, stacked along a new leading axis.

    For a ``(3, *shape)`` array the result has shape ``(dim, 3, *shape)``;
    at a boundary cell the mirrored ghost makes the difference one-sided
    with half weight, matching the zero-flux condition.
    """
    u = np.asarray(u, dtype=float)
    lead = u.ndim - grid.dim
    out = []
    for axis, h in enumerate(grid.spacing):
        ax = axis + lead
        n = u.shape[ax]
        up = _padded(u, ax)
        hi = np.take(up, np.arange(2, n + 2), axis=ax)
        lo = np.take(up, np.arange(0, n), axis=ax)
        out.append((hi - lo) / (2.0 * h))
    return np.stack(out)


def error_norms(u: np.ndarray, v: np.ndarray, grid: Grid,
                grad_v: np.ndarray | None = None) -> tuple[float, float, float]:
    """Return ``(linf, l2, h1)`` of ``u - v``.

    ``linf`` is the largest component magnitude and ``l2`` the
    volume-weighted Euclidean norm.  ``h1 = l2 + ||D u - grad v||_2`` with
    ``D`` the centred difference of :func:`central_gradient`; ``grad_v`` is
    the exact gradient of ``v`` when known (shape ``(dim, *v.shape)``) and
    defaults to ``D v``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise GridMismatchError(f"shapes differ: {u.shape} vs {v.shape}")
    lead = u.ndim - grid.dim
    if u.shape[lead:] != grid.shape:
        raise GridMismatchError(f"array of shape {u.shape} does not match grid {grid.shape}")
    e = u - v
    linf = float(np.max(np.abs(e))) if e.size else 0.0
    l2 = float(np.sqrt(grid.cell_volume * float(np.sum(e * e))))
    if grad_v is None:
        grad_v = central_gradient(v, grid)
    elif np.shape(grad_v) != (grid.dim, *v.shape):
        raise GridMismatchError(f"gradient of shape {np.shape(grad_v)} does not match {(grid.dim, *v.shape)}")
    de = central_gradient(u, grid) - grad_v
    h1 = l2 + float(np.sqrt(grid.cell_volume * float(np.sum(de * de))))
    return linf, l2, h1


def pointwise_norm(m: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(m * m, axis=0))


def norm_drift(m: np.ndarray) -> float:
    """Largest deviation of the pointwise Euclidean length from one."""
    return float(np.max(np.abs(pointwise_norm(m) - 1.0)))
