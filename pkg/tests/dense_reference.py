"""Naive dense reference stepper used as an oracle.

Everything here is assembled explicitly: the Neumann Laplacian as a dense
matrix, Helmholtz solves through ``np.linalg.solve`` and the rotation step as
one 3x3 linear solve per point.  It shares no numerical code with the
package except the analytic manufactured formulas.
"""

from __future__ import annotations

import numpy as np

DAMPED = {"GSPM", "SchemeI", "A_Damp", "B_Damp", "FullLLG"}
DOUBLE = {"B_NoDamp", "B_Damp", "FullLLG"}


def laplacian_matrix(cells: tuple[int, ...]) -> np.ndarray:
    mats = []
    for n in cells:
        h = 1.0 / n
        L = np.zeros((n, n))
        for i in range(n):
            if i > 0:
                L[i, i - 1] += 1.0
                L[i, i] -= 1.0
            if i < n - 1:
                L[i, i + 1] += 1.0
                L[i, i] -= 1.0
        mats.append(L / h**2)
    total = np.zeros((int(np.prod(cells)),) * 2)
    for axis, L in enumerate(mats):
        term = np.array([[1.0]])
        for other, n in enumerate(cells):
            term = np.kron(term, L if other == axis else np.eye(n))
        total += term
    return total


def skew(w: np.ndarray) -> np.ndarray:
    return np.array([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])


class DenseStepper:
    def __init__(self, cells, scheme, dt, alpha=0.01, epsilon=1.0, stage=None, drift=None):
        self.cells = tuple(cells)
        self.L = laplacian_matrix(self.cells)
        self.I = np.eye(self.L.shape[0])
        self.scheme = scheme
        self.dt = dt
        self.alpha = alpha
        self.eps = epsilon
        self.stage = stage    # t -> (3, n) field or None
        self.drift = drift    # t -> (3, n) additive source or None

    def solve(self, c, b):
        return np.linalg.solve(self.I - c * self.L, b)

    def step(self, m: np.ndarray, t0: float) -> np.ndarray:
        """``m`` has shape ``(3, n)`` with points in C order."""
        dt, eps, a = self.dt, self.eps, self.alpha
        t1 = t0 + dt
        F = self.stage(t1) if self.stage else np.zeros_like(m)
        damped = self.scheme in DAMPED
        if self.scheme == "SchemeI":
            frozen = m
        else:
            g = [self.solve(eps * dt, m[i] + dt * F[i]) for i in range(3)]
            t1_ = m[0] + g[1] * m[2] - g[2] * m[1]
            gt1 = self.solve(eps * dt, t1_ + dt * F[0])
            t2_ = m[1] + g[2] * t1_ - gt1 * m[2]
            gt2 = self.solve(eps * dt, t2_ + dt * F[1])
            t3_ = m[2] + gt1 * t2_ - gt2 * t1_
            mt = np.array([t1_, t2_, t3_])
            if damped and a > 0:
                ms = np.array([self.solve(a * eps * dt, mt[i] + a * dt * F[i]) for i in range(3)])
            else:
                ms = mt
            if self.scheme == "GSPM":
                return ms / np.linalg.norm(ms, axis=0)
            if self.scheme in DOUBLE:
                frozen = np.array([self.solve(eps * dt, ms[i]) for i in range(3)])
            else:
                frozen = ms
        hvec = eps * (self.L @ frozen.T).T
        damp = a if damped else 0.0
        s = self.drift(t0) if self.drift else np.zeros_like(m)
        out = np.empty_like(m)
        for p in range(m.shape[1]):
            h = hvec[:, p]
            w = 0.5 * dt * (h + damp * np.cross(m[:, p], h))
            W = skew(w)
            out[:, p] = np.linalg.solve(np.eye(3) - W, (np.eye(3) + W) @ m[:, p] + dt * s[:, p])
        return out
