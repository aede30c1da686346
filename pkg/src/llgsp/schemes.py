"""Time steppers for the Landau-Lifshitz(-Gilbert) equation.

All proposed schemes share one pipeline per step:

1. Gauss-Seidel predictor ``m~`` built from Helmholtz-smoothed components
   ``g_i = (I - eps dt Lap_h)^{-1} (m_i + dt F_i)``;
2. optional damping solve ``m* = (I - alpha eps dt Lap_h)^{-1} (m~ + alpha dt F)``;
3. optional double-diffusion solve ``m** = (I - eps dt Lap_h)^{-1} m*``;
4. a pointwise Cayley rotation of ``m^n`` about the frozen field
   ``eps Lap_h m** (+ source field)``.

The GSPM baseline replaces step 4 by normalisation of the damped predictor.
"""

from __future__ import annotations

import enum
import math
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .cayley import preserving_step_field
from .grid import Grid, VectorField, gradient_sq_sum, laplacian, norm_drift
from .helmholtz import HelmholtzOperator, SolverConvergenceError, solve_cg, solve_vector
from .sources import CompositeSource, Source

DIVERGENCE_LIMIT = 10.0


class Scheme(str, enum.Enum):
    GSPM = "GSPM"
    SCHEME_I = "SchemeI"
    A_NODAMP = "A_NoDamp"
    B_NODAMP = "B_NoDamp"
    A_DAMP = "A_Damp"
    B_DAMP = "B_Damp"
    FULL_LLG = "FullLLG"

    @classmethod
    def parse(cls, name: str | Scheme) -> Scheme:
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown scheme {name!r}; choose from {[s.value for s in cls]}") from None


_DAMPED = {Scheme.A_DAMP, Scheme.B_DAMP, Scheme.FULL_LLG, Scheme.GSPM, Scheme.SCHEME_I}
_DOUBLE_DIFFUSION = {Scheme.B_NODAMP, Scheme.B_DAMP, Scheme.FULL_LLG}


class DegenerateStateError(ArithmeticError):
    """A point reached zero magnitude before projection."""


class DivergenceError(ArithmeticError):
    """The state left the admissible range (non-finite or ``|m|_inf > 10``)."""


@dataclass(frozen=True)
class SchemeConfig:
    """Parameters of a time integration run.

    ``alpha`` is ignored by the undamped schemes.  ``solver`` picks the
    Helmholtz backend (``"dct"`` or ``"cg"``); ``tol`` applies to CG only.
    """

    scheme: Scheme = Scheme.B_DAMP
    dt: float = 1e-3
    t_final: float = 0.1
    alpha: float = 0.01
    epsilon: float = 1.0
    q: float = 0.0
    tol: float = 1e-12
    solver: str = "dct"

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_final < 0:
            raise ValueError("t_final must be non-negative")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.q < 0:
            raise ValueError("q must be non-negative")
        if self.solver not in ("dct", "cg"):
            raise ValueError(f"unknown solver {self.solver!r}")

    @property
    def damping(self) -> float:
        return self.alpha if self.scheme in _DAMPED else 0.0


def step_times(t_final: float, dt: float) -> list[float]:
    """Step end times from 0 to ``t_final``; the last step may be shorter."""
    if t_final == 0:
        return []
    n = int(round(t_final / dt))
    if n >= 1 and abs(n * dt - t_final) <= 1e-9 * t_final:
        return [t_final * (i + 1) / n for i in range(n)]
    n = int(math.floor(t_final / dt))
    return [dt * (i + 1) for i in range(n)] + [t_final]


class Stepper:
    """Advances a magnetization array by one step of ``cfg.scheme``.

    Helmholtz operators are cached per step size, so a shortened last step
    costs one extra set of symbols.
    """

    def __init__(self, grid: Grid, cfg: SchemeConfig, source: Source | None = None):
        self.grid = grid
        self.cfg = cfg
        if source is None:
            source = CompositeSource(cfg.q) if cfg.q else Source()
        self.source = source
        self._ops: dict[float, HelmholtzOperator] = {}

    def _solve(self, shift: float, b: np.ndarray) -> np.ndarray:
        op = self._ops.get(shift)
        if op is None:
            op = self._ops[shift] = HelmholtzOperator(self.grid, shift)
        if self.cfg.solver == "cg":
            if b.ndim == self.grid.dim:
                return solve_cg(op, b, self.cfg.tol)
            return np.stack([solve_cg(op, bi, self.cfg.tol) for bi in b])
        return solve_vector(op, b[None])[0] if b.ndim == self.grid.dim else solve_vector(op, b)

    def _stage_field(self, m: np.ndarray, t: float) -> np.ndarray:
        f = self.source.stage_field(m, t, self.grid)
        return np.zeros_like(m) if f is None else f

    def predictor(self, m: np.ndarray, t1: float, dt: float) -> np.ndarray:
        """Gauss-Seidel sweep over the three components (no projection)."""
        c = self.cfg.epsilon * dt
        g = self._solve(c, m + dt * self._stage_field(m, t1))
        mt = np.empty_like(m)
        mt[0] = m[0] + g[1] * m[2] - g[2] * m[1]
        mix = np.stack([mt[0], m[1], m[2]])
        g1 = self._solve(c, mt[0] + dt * self._stage_field(mix, t1)[0])
        mt[1] = m[1] + g[2] * mt[0] - g1 * m[2]
        mix[1] = mt[1]
        g2 = self._solve(c, mt[1] + dt * self._stage_field(mix, t1)[1])
        mt[2] = m[2] + g1 * mt[1] - g2 * mt[0]
        return mt

    def damping(self, mt: np.ndarray, t1: float, dt: float) -> np.ndarray:
        alpha = self.cfg.alpha
        if alpha == 0:
            return mt
        rhs = mt + alpha * dt * self._stage_field(mt, t1)
        return self._solve(alpha * self.cfg.epsilon * dt, rhs)

    def double_diffusion(self, ms: np.ndarray, dt: float) -> np.ndarray:
        return self._solve(self.cfg.epsilon * dt, ms)

    def rotate(self, m: np.ndarray, frozen: np.ndarray, t0: float, t1: float, dt: float) -> np.ndarray:
        hvec = self.cfg.epsilon * laplacian(frozen, self.grid)
        extra = self.source.rotation_field(frozen, t1, self.grid)
        if extra is not None:
            hvec = hvec + extra
        return preserving_step_field(m, hvec, self.cfg.damping, dt, self.source.drift(t0, self.grid))

    def step(self, m: np.ndarray, t0: float, t1: float) -> np.ndarray:
        dt = t1 - t0
        scheme = self.cfg.scheme
        if scheme is Scheme.SCHEME_I:
            return self.rotate(m, m, t0, t1, dt)
        mt = self.predictor(m, t1, dt)
        if scheme is Scheme.GSPM:
            ms = self.damping(mt, t1, dt)
            length = np.sqrt(np.sum(ms * ms, axis=0))
            if not np.all(np.isfinite(length)) or np.min(length) <= 1e-300:
                raise DegenerateStateError("zero-length magnetization before projection")
            return ms / length
        ms = self.damping(mt, t1, dt) if scheme in _DAMPED else mt
        frozen = self.double_diffusion(ms, dt) if scheme in _DOUBLE_DIFFUSION else ms
        return self.rotate(m, frozen, t0, t1, dt)


def _one_step(scheme: Scheme, m: VectorField, cfg: SchemeConfig, src: Source | None, t: float) -> VectorField:
    cfg = SchemeConfig(**{**cfg.__dict__, "scheme": scheme})
    stepper = Stepper(m.grid, cfg, src)
    return VectorField(m.grid, stepper.step(m.values, t, t + cfg.dt))


def step_gspm(m: VectorField, cfg: SchemeConfig, src: Source | None = None, t: float = 0.0) -> VectorField:
    """Gauss-Seidel projection step (predictor, heat-flow damping, normalisation)."""
    return _one_step(Scheme.GSPM, m, cfg, src, t)


def step_scheme_i(m: VectorField, cfg: SchemeConfig, src: Source | None = None, t: float = 0.0) -> VectorField:
    """Rotation about the explicit field ``eps Lap_h m^n``; needs a CFL-type step bound."""
    return _one_step(Scheme.SCHEME_I, m, cfg, src, t)


def step_scheme_a(m: VectorField, cfg: SchemeConfig, damped: bool, src: Source | None = None,
                  t: float = 0.0) -> VectorField:
    return _one_step(Scheme.A_DAMP if damped else Scheme.A_NODAMP, m, cfg, src, t)


def step_scheme_b_nodamp(m: VectorField, cfg: SchemeConfig, src: Source | None = None,
                         t: float = 0.0) -> VectorField:
    return _one_step(Scheme.B_NODAMP, m, cfg, src, t)


def step_scheme_b_damp(m: VectorField, cfg: SchemeConfig, src: Source | None = None,
                       t: float = 0.0) -> VectorField:
    return _one_step(Scheme.B_DAMP, m, cfg, src, t)


def step_full_llg(m: VectorField, cfg: SchemeConfig, src: Source | None = None, t: float = 0.0) -> VectorField:
    """Four-stage step with source terms; identical to B with damping for a zero source."""
    return _one_step(Scheme.FULL_LLG, m, cfg, src, t)


Observer = Callable[[int, float, np.ndarray], None]


@dataclass
class RunReport:
    """Outcome of one :func:`evolve` call.

    Traces hold one entry per recorded state, starting with the initial one.
    """

    final: VectorField
    steps: int
    t_final: float
    times: list[float] = field(default_factory=list)
    drift_trace: list[float] = field(default_factory=list)
    energy_trace: list[float] = field(default_factory=list)
    wall_time: float = 0.0
    diverged: bool = False
    divergence_step: int | None = None
    message: str = ""
    errors: tuple[float, float, float] | None = None

    @property
    def max_drift(self) -> float:
        return max(self.drift_trace) if self.drift_trace else 0.0

    def summary(self) -> dict:
        return {
            "steps": self.steps,
            "t_final": self.t_final,
            "diverged": self.diverged,
            "divergence_step": self.divergence_step,
            "message": self.message,
            "max_norm_drift": self.max_drift,
            "energy_initial": self.energy_trace[0] if self.energy_trace else None,
            "energy_final": self.energy_trace[-1] if self.energy_trace else None,
            "errors": None if self.errors is None else dict(zip(("linf", "l2", "h1"), self.errors)),
            "wall_time": self.wall_time,
        }


def exchange_energy(m: np.ndarray, grid: Grid, epsilon: float = 1.0) -> float:
    return 0.5 * epsilon * gradient_sq_sum(m, grid)


def evolve(m0: VectorField, cfg: SchemeConfig, src: Source | None = None,
           observers: Sequence[Observer] = (), unit_tol: float = 1e-12) -> RunReport:
    """Integrate from ``t = 0`` to ``cfg.t_final``.

    Numerical failures do not raise; they end the run early and are recorded
    in the report (``diverged``, ``divergence_step``, ``message``).
    """
    drift0 = norm_drift(m0.values)
    if drift0 > unit_tol:
        raise ValueError(f"initial state is not unit length (drift {drift0:.3e})")
    grid = m0.grid
    stepper = Stepper(grid, cfg, src)
    m = m0.values.copy()
    report = RunReport(final=m0, steps=0, t_final=0.0)
    report.times.append(0.0)
    report.drift_trace.append(drift0)
    report.energy_trace.append(exchange_energy(m, grid, cfg.epsilon))
    for obs in observers:
        obs(0, 0.0, m)
    start = time.perf_counter()
    t0 = 0.0
    for n, t1 in enumerate(step_times(cfg.t_final, cfg.dt), start=1):
        try:
            with np.errstate(over="raise", invalid="raise"):
                m_new = stepper.step(m, t0, t1)
            if not np.all(np.isfinite(m_new)) or np.max(np.abs(m_new)) > DIVERGENCE_LIMIT:
                raise DivergenceError(f"state left the admissible range at step {n}")
        except (ArithmeticError, FloatingPointError, SolverConvergenceError, ValueError) as exc:
            report.diverged = True
            report.divergence_step = n
            report.message = f"{type(exc).__name__}: {exc}"
            break
        m = m_new
        t0 = t1
        report.steps = n
        report.times.append(t1)
        report.drift_trace.append(norm_drift(m))
        report.energy_trace.append(exchange_energy(m, grid, cfg.epsilon))
        for obs in observers:
            obs(n, t1, m)
    report.wall_time = time.perf_counter() - start
    report.t_final = t0
    report.final = VectorField(grid, m)
    return report
