"""Source terms for the reduced LLG equation.

A source can act in two ways:

* as part of the effective field (anisotropy and applied field), entering the
  Helmholtz stages and the rotation field;
* as an additive drift ``+ f`` on the right-hand side, as a manufactured
  forcing does.  Stages that only accept a field see the drift's tangential
  field equivalent instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid
from .manufactured import ManufacturedCase


class Source:
    """Zero source; base class for the others.

    ``stage_field`` feeds the Gauss-Seidel and damping solves,
    ``rotation_field`` is added to the frozen field of the rotation step and
    ``drift`` is the explicit additive term of the rotation step.  ``None``
    means "contributes nothing".
    """

    name = "zero"

    def stage_field(self, m: np.ndarray, t: float, grid: Grid) -> np.ndarray | None:
        return None

    def rotation_field(self, m: np.ndarray, t: float, grid: Grid) -> np.ndarray | None:
        return None

    def drift(self, t: float, grid: Grid) -> np.ndarray | None:
        return None


ZeroSource = Source


@dataclass
class CompositeSource(Source):
    """Uniaxial anisotropy plus a uniform applied field, ``-q (0, m2, m3) + h_e``."""

    q: float = 0.0
    applied: tuple[float, float, float] = (0.0, 0.0, 0.0)
    name: str = field(default="composite", init=False)

    def _field(self, m: np.ndarray) -> np.ndarray:
        f = np.zeros_like(m)
        f[1] = -self.q * m[1]
        f[2] = -self.q * m[2]
        h_e = np.asarray(self.applied, dtype=float).reshape((3,) + (1,) * (m.ndim - 1))
        return f + h_e

    def stage_field(self, m, t, grid):
        return self._field(m)

    def rotation_field(self, m, t, grid):
        return self._field(m)


@dataclass
class ManufacturedSource(Source):
    """Forcing that makes ``case`` an exact solution for the given ``alpha``, ``epsilon``."""

    case: ManufacturedCase
    alpha: float
    epsilon: float = 1.0
    name: str = field(default="manufactured", init=False)

    def stage_field(self, m, t, grid):
        return self.case.field_forcing(grid.coords, t, self.alpha, self.epsilon)

    def drift(self, t, grid):
        return self.case.forcing(grid.coords, t, self.alpha, self.epsilon)
