"""Manufactured solutions and the initial-condition catalog.

Every exact solution used here has the form

    m_e = (cos(psi) sin t, sin(psi) sin t, cos t)

for a scalar profile ``psi(x)`` with zero normal derivative on the boundary.
With ``G = |grad psi|^2`` and ``L = Lap psi`` the Laplacian is

    Lap m_e = sin t * (-cos(psi) G - sin(psi) L, -sin(psi) G + cos(psi) L, 0),

which gives the forcing in closed form.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .grid import Grid, VectorField


@dataclass(frozen=True)
class Profile:
    """Scalar profile ``psi`` with its squared gradient and Laplacian."""

    name: str
    dim: int
    value: Callable
    grad: Callable  # returns a tuple, one entry per axis
    lap: Callable


def _poly(x):
    return x**2 * (1 - x) ** 2


def _dpoly(x):
    return 2 * x * (1 - x) * (1 - 2 * x)


def _ddpoly(x):
    return 2 - 12 * x + 12 * x**2


COS_PI_X = Profile(
    "cos(pi x)", 1,
    value=lambda x: np.cos(np.pi * x[0]),
    grad=lambda x: (-np.pi * np.sin(np.pi * x[0]),),
    lap=lambda x: -np.pi**2 * np.cos(np.pi * x[0]),
)

XYZ = Profile(
    "XYZ", 3,
    value=lambda x: _poly(x[0]) * _poly(x[1]) * _poly(x[2]),
    grad=lambda x: (_dpoly(x[0]) * _poly(x[1]) * _poly(x[2]),
                    _poly(x[0]) * _dpoly(x[1]) * _poly(x[2]),
                    _poly(x[0]) * _poly(x[1]) * _dpoly(x[2])),
    lap=lambda x: (_ddpoly(x[0]) * _poly(x[1]) * _poly(x[2])
                   + _poly(x[0]) * _ddpoly(x[1]) * _poly(x[2])
                   + _poly(x[0]) * _poly(x[1]) * _ddpoly(x[2])),
)


@dataclass(frozen=True)
class ManufacturedCase:
    """Exact solution ``m_e(x, t)`` of the forced LLG equation.

    ``x`` is a tuple of coordinate arrays (as produced by ``Grid.coords``)
    and the returned arrays carry the component axis first.
    """

    name: str
    profile: Profile

    @property
    def dim(self) -> int:
        return self.profile.dim

    def _psi(self, x):
        x = tuple(np.asarray(c, dtype=float) for c in x)
        if len(x) < self.dim:
            raise ValueError(f"case {self.name!r} needs {self.dim} coordinates, got {len(x)}")
        psi = self.profile.value(x)
        gsq = sum(g**2 for g in self.profile.grad(x))
        lap = self.profile.lap(x)
        shape = np.broadcast_shapes(*(c.shape for c in x))
        return (np.broadcast_to(psi, shape), np.broadcast_to(gsq, shape), np.broadcast_to(lap, shape))

    def exact(self, x, t: float) -> np.ndarray:
        psi, _, _ = self._psi(x)
        s, c = np.sin(t), np.cos(t)
        return np.stack([np.cos(psi) * s, np.sin(psi) * s, np.full(psi.shape, c)])

    def time_derivative(self, x, t: float) -> np.ndarray:
        psi, _, _ = self._psi(x)
        s, c = np.sin(t), np.cos(t)
        return np.stack([np.cos(psi) * c, np.sin(psi) * c, np.full(psi.shape, -s)])

    def gradient(self, x, t: float) -> np.ndarray:
        """Spatial derivatives, shape ``(dim, 3, ...)`` (axis first, then component)."""
        psi, _, _ = self._psi(x)
        s = np.sin(t)
        cp, sp = np.cos(psi), np.sin(psi)
        out = []
        for g in self.profile.grad(tuple(np.asarray(c, dtype=float) for c in x)):
            g = np.broadcast_to(g, psi.shape)
            out.append(s * np.stack([-sp * g, cp * g, np.zeros(psi.shape)]))
        return np.stack(out)

    def laplacian(self, x, t: float) -> np.ndarray:
        psi, gsq, lap = self._psi(x)
        s = np.sin(t)
        cp, sp = np.cos(psi), np.sin(psi)
        return s * np.stack([-cp * gsq - sp * lap, -sp * gsq + cp * lap, np.zeros(psi.shape)])

    def forcing(self, x, t: float, alpha: float, epsilon: float = 1.0) -> np.ndarray:
        """Additive source making ``m_e`` an exact solution.

        ``f_e = dm_e/dt + eps m_e x Lap m_e + alpha eps m_e x (m_e x Lap m_e)``.
        """
        m = self.exact(x, t)
        hx = np.cross(m, epsilon * self.laplacian(x, t), axis=0)
        return self.time_derivative(x, t) + hx + alpha * np.cross(m, hx, axis=0)

    def field_forcing(self, x, t: float, alpha: float, epsilon: float = 1.0) -> np.ndarray:
        """Tangential field ``F`` with ``-m_e x F - alpha m_e x (m_e x F) = f_e``.

        Used where a stage can only take the source as part of the
        effective field.  Since ``f_e`` is tangent to ``m_e`` the inverse is
        ``F = (alpha f_e + m_e x f_e) / (1 + alpha^2)``.
        """
        m = self.exact(x, t)
        f = self.forcing(x, t, alpha, epsilon)
        return (alpha * f + np.cross(m, f, axis=0)) / (1.0 + alpha**2)

    def sample(self, grid: Grid, t: float) -> VectorField:
        return VectorField(grid, self.exact(grid.coords, t))


CASES = {
    "1d": ManufacturedCase("1d", COS_PI_X),
    "3d": ManufacturedCase("3d", XYZ),
}


def get_case(name: str) -> ManufacturedCase:
    try:
        return CASES[name]
    except KeyError:
        raise ValueError(f"unknown manufactured case {name!r}; choose from {sorted(CASES)}") from None


def exact_1d(grid: Grid, t: float) -> VectorField:
    return CASES["1d"].sample(grid, t)


def exact_3d(grid: Grid, t: float) -> VectorField:
    return CASES["3d"].sample(grid, t)


# -- initial conditions -----------------------------------------------------

def _angles(azimuth, polar, shape):
    a = np.broadcast_to(azimuth, shape)
    b = np.broadcast_to(polar, shape)
    return np.stack([np.cos(a) * np.sin(b), np.sin(a) * np.sin(b), np.cos(b)])


@dataclass(frozen=True)
class InitialCondition:
    """``m0 = (cos a sin b, sin a sin b, cos b)`` for azimuth ``a``, polar ``b``."""

    name: str
    formula: str
    min_dim: int
    azimuth: Callable
    polar: Callable
    even_x_only: bool = False

    def sample(self, grid: Grid) -> VectorField:
        if grid.dim < self.min_dim:
            raise ValueError(f"initial condition {self.name!r} needs a {self.min_dim}D grid")
        if self.even_x_only and grid.cells[0] % 2:
            raise ValueError(f"initial condition {self.name!r} has a pole at x = 1/2; use an even Nx")
        x = grid.coords
        m0 = _angles(self.azimuth(x), self.polar(x), grid.shape)
        return VectorField.unit(grid, m0)


def _x(x):
    return x[0]


def _const(value):
    return lambda x: value


_IC_LIST = [
    InitialCondition("1d_sin0", "(cos(cos pi x) sin 0, sin(cos pi x) sin 0, cos 0)", 1,
                     lambda x: np.cos(np.pi * _x(x)), _const(0.0)),
    InitialCondition("1d_sin001", "(cos(cos pi x) sin 0.01, sin(cos pi x) sin 0.01, cos 0.01)", 1,
                     lambda x: np.cos(np.pi * _x(x)), _const(0.01)),
    InitialCondition("3d_cos_pix", "(cos(cos pi x) sin 0.01, sin(cos pi x) sin 0.01, cos 0.01)", 1,
                     lambda x: np.cos(np.pi * _x(x)), _const(0.01)),
    InitialCondition("3d_x_plus_t", "(cos(cos pi x) sin(x+t), sin(cos pi x) sin(x+t), cos(x+t)), t=0", 1,
                     lambda x: np.cos(np.pi * _x(x)), lambda x: _x(x)),
    InitialCondition("3d_cos_cos_pix", "(cos(cos(cos pi x)) sin(pi x+t), sin(cos(cos pi x)) sin(pi x+t), cos(pi x+t)), t=0", 1,
                     lambda x: np.cos(np.cos(np.pi * _x(x))), lambda x: np.pi * _x(x)),
    InitialCondition("3d_cos_X", "(cos X sin 0.01, sin X sin 0.01, cos 0.01), X = x^2 (1-x)^2", 1,
                     lambda x: _poly(_x(x)), _const(0.01)),
    InitialCondition("3d_tan_pix", "(cos(tan pi x) sin 0.01, sin(tan pi x) sin 0.01, cos 0.01)", 1,
                     lambda x: np.tan(np.pi * _x(x)), _const(0.01), even_x_only=True),
    InitialCondition("3d_2xyz", "(cos(2(x+y+z)) sin 0.01, sin(2(x+y+z)) sin 0.01, cos 0.01)", 3,
                     lambda x: 2 * (x[0] + x[1] + x[2]), _const(0.01)),
    InitialCondition("3d_cospix_cospiy", "(cos(cos pi x cos pi y) sin 0.01, sin(cos pi x cos pi y) sin 0.01, cos 0.01)", 2,
                     lambda x: np.cos(np.pi * x[0]) * np.cos(np.pi * x[1]), _const(0.01)),
    InitialCondition("3d_xyz", "(cos(XYZ) sin 0.01, sin(XYZ) sin 0.01, cos 0.01)", 3,
                     lambda x: _poly(x[0]) * _poly(x[1]) * _poly(x[2]), _const(0.01)),
    InitialCondition("3d_cospix_cospiy_cospiz",
                     "(cos(cos pi x cos pi y cos pi z) sin 0.01, sin(...) sin 0.01, cos 0.01)", 3,
                     lambda x: np.cos(np.pi * x[0]) * np.cos(np.pi * x[1]) * np.cos(np.pi * x[2]),
                     _const(0.01)),
]

INITIAL_CONDITIONS = {ic.name: ic for ic in _IC_LIST}


def ic(name: str, grid: Grid) -> VectorField:
    """Sample catalog initial condition ``name`` on ``grid``."""
    try:
        entry = INITIAL_CONDITIONS[name]
    except KeyError:
        raise ValueError(f"unknown initial condition {name!r}; see `llgsp list-ics`") from None
    return entry.sample(grid)
