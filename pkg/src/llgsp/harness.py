"""Convergence, norm-preservation and comparison studies.

A :class:`StudySpec` describes one study; :func:`run_study` dispatches on its
``kind`` and returns a :class:`StudyReport` whose rows line up with the
ladder.  Ladder entries are independent and may run on a thread pool; the
report is assembled in ladder order so results do not depend on scheduling.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .grid import Grid, VectorField, error_norms
from .manufactured import get_case, ic
from .schemes import RunReport, Scheme, SchemeConfig, evolve
from .sources import CompositeSource, ManufacturedSource, Source

KINDS = ("single-run", "converge-time", "converge-space", "coupled-3d", "norm-test", "compare")
NORMS = ("linf", "l2", "h1")


def fit_order(steps: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of ``log(error)`` against ``log(step)``.

    Raises
    ------
    ValueError
        Fewer than two entries, or any error or step that is not a positive
        finite number.
    """
    s = np.asarray(steps, dtype=float)
    e = np.asarray(errors, dtype=float)
    if s.shape != e.shape or s.ndim != 1:
        raise ValueError("steps and errors must be 1D sequences of equal length")
    if s.size < 2:
        raise ValueError("need at least two ladder entries to fit an order")
    if not (np.all(np.isfinite(e)) and np.all(e > 0)):
        raise ValueError(f"errors must be positive and finite, got {e.tolist()}")
    if not (np.all(np.isfinite(s)) and np.all(s > 0)):
        raise ValueError(f"steps must be positive and finite, got {s.tolist()}")
    slope, _ = np.polyfit(np.log(s), np.log(e), 1)
    return float(slope)


def coupled_steps(h: float, t_final: float) -> int:
    """Step count for the ``k = h^2`` refinement, rounded down to divide ``T``."""
    return max(1, int(math.floor(t_final / h**2 + 1e-9)))


@dataclass(frozen=True)
class StudySpec:
    """Flat description of a study.

    ``ladder`` holds step sizes for ``converge-time`` and plain ``norm-test``,
    and mesh sizes ``h`` for ``converge-space`` and ``coupled-3d`` (and for
    ``norm-test`` with ``coupled=True``).  ``grid`` fixes the cells of studies
    that refine only in time; its length gives the dimension otherwise.
    With ``case`` set the run starts from the exact solution and carries the
    matching forcing; without it the run starts from catalog entry ``ic``
    with a zero (or anisotropy/applied-field) source.
    """

    kind: str = "single-run"
    scheme: str = "B_Damp"
    compare_scheme: str = "GSPM"
    ladder: tuple[float, ...] = ()
    grid: tuple[int, ...] = (2000,)
    dt: float = 1e-3
    t_final: float = 0.1
    alpha: float = 0.01
    epsilon: float = 1.0
    q: float = 0.0
    applied: tuple[float, float, float] = (0.0, 0.0, 0.0)
    tol: float = 1e-12
    solver: str = "dct"
    case: str | None = None
    ic: str = "1d_sin001"
    coupled: bool = False
    threads: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "ladder", tuple(float(v) for v in self.ladder))
        object.__setattr__(self, "grid", tuple(int(n) for n in self.grid))
        object.__setattr__(self, "applied", tuple(float(v) for v in self.applied))
        if self.kind not in KINDS:
            raise ValueError(f"kind: unknown study kind {self.kind!r}; choose from {list(KINDS)}")
        Scheme.parse(self.scheme)
        Scheme.parse(self.compare_scheme)
        if not 1 <= len(self.grid) <= 3 or any(n < 2 for n in self.grid):
            raise ValueError(f"grid: need 1 to 3 axes with at least 2 cells each, got {list(self.grid)}")
        if len(self.applied) != 3:
            raise ValueError("applied: must have three components")
        if self.threads < 1:
            raise ValueError("threads: must be at least 1")
        if self.case is not None:
            get_case(self.case)
        if self.kind in ("converge-time", "converge-space", "coupled-3d", "norm-test"):
            lad = self.ladder
            if len(lad) < 2:
                raise ValueError("ladder: need at least two entries")
            if any(not v > 0 for v in lad):
                raise ValueError("ladder: entries must be positive")
            if any(b >= a for a, b in zip(lad, lad[1:])):
                raise ValueError("ladder: entries must be strictly decreasing")
        # validates dt, alpha, epsilon, q, solver
        self.scheme_config()

    @property
    def dim(self) -> int:
        return 3 if self.kind == "coupled-3d" else len(self.grid)

    @property
    def refines_space(self) -> bool:
        return self.kind in ("converge-space", "coupled-3d") or (self.kind == "norm-test" and self.coupled)

    def scheme_config(self, scheme: str | None = None, dt: float | None = None) -> SchemeConfig:
        return SchemeConfig(scheme=Scheme.parse(scheme or self.scheme), dt=self.dt if dt is None else dt,
                            t_final=self.t_final, alpha=self.alpha, epsilon=self.epsilon, q=self.q,
                            tol=self.tol, solver=self.solver)

    def entries(self) -> list[tuple[float, Grid, float]]:
        """``(ladder value, grid, dt)`` for every ladder entry."""
        out = []
        for v in self.ladder:
            if self.refines_space:
                n = int(round(1.0 / v))
                grid = Grid((n,) * self.dim)
                if self.kind == "coupled-3d" or self.coupled:
                    dt = self.t_final / coupled_steps(1.0 / n, self.t_final)
                else:
                    dt = self.dt
            else:
                grid, dt = Grid(self.grid), v
            out.append((v, grid, dt))
        return out


@dataclass
class StudyRow:
    value: float
    cells: tuple[int, ...]
    dt: float
    run: RunReport

    @property
    def diverged(self) -> bool:
        return self.run.diverged

    @property
    def errors(self) -> tuple[float, float, float] | None:
        return None if self.run.diverged else self.run.errors

    def summary(self) -> dict:
        return {"value": self.value, "cells": list(self.cells), "dt": self.dt, **self.run.summary(),
                "energy": energy_diagnostic(self.run.energy_trace)}


@dataclass
class StudyReport:
    """Rows in ladder order plus fitted orders.

    ``orders`` is fitted against the ladder variable (``k`` or ``h``); the
    coupled study also fills ``orders_space`` (against ``h``) while
    ``orders`` is taken against ``k``.  Orders are ``None`` whenever any row
    diverged.
    """

    spec: StudySpec
    rows: list[StudyRow] = field(default_factory=list)
    orders: dict[str, float] | None = None
    orders_space: dict[str, float] | None = None
    snapshots: dict[str, VectorField] = field(default_factory=dict)
    discrepancy: float | None = None

    @property
    def ok(self) -> bool:
        return bool(self.rows) and not any(r.diverged for r in self.rows)

    @property
    def max_drift(self) -> float:
        return max((r.run.max_drift for r in self.rows), default=0.0)

    def summary(self) -> dict:
        return {
            "spec": asdict(self.spec),
            "rows": [r.summary() for r in self.rows],
            "orders": self.orders,
            "orders_space": self.orders_space,
            "discrepancy": self.discrepancy,
            "max_norm_drift": self.max_drift,
        }


def energy_diagnostic(trace: Sequence[float]) -> dict:
    """Monotonicity report for an energy trace.

    ``max_increase`` is the largest step-to-step rise (0 for a
    non-increasing trace) and ``net_increase`` is ``E(T) - E(0)``.
    """
    e = np.asarray(trace, dtype=float)
    if e.size == 0:
        return {"initial": None, "final": None, "max_increase": 0.0, "net_increase": 0.0, "monotone": True}
    rises = np.diff(e)
    max_rise = float(max(0.0, rises.max())) if rises.size else 0.0
    return {"initial": float(e[0]), "final": float(e[-1]), "max_increase": max_rise,
            "net_increase": float(e[-1] - e[0]), "monotone": max_rise == 0.0}


def _source(spec: StudySpec, scheme: Scheme) -> Source:
    if spec.case is not None:
        cfg = spec.scheme_config(scheme.value)
        return ManufacturedSource(get_case(spec.case), cfg.damping, spec.epsilon)
    if spec.q or any(spec.applied):
        return CompositeSource(spec.q, spec.applied)
    return Source()


def single_run(spec: StudySpec, grid: Grid, dt: float, scheme: str | None = None,
               observers: Sequence[Callable] = ()) -> RunReport:
    """One evolve call; attaches error norms when the run is manufactured."""
    cfg = spec.scheme_config(scheme, dt)
    if spec.case is not None:
        case = get_case(spec.case)
        m0 = case.sample(grid, 0.0)
    else:
        case = None
        m0 = ic(spec.ic, grid)
    report = evolve(m0, cfg, _source(spec, cfg.scheme), observers)
    if case is not None and not report.diverged:
        t = report.t_final
        report.errors = error_norms(report.final.values, case.exact(grid.coords, t), grid,
                                    case.gradient(grid.coords, t))
    return report


def _run_ladder(spec: StudySpec) -> list[StudyRow]:
    entries = spec.entries()

    def one(entry):
        value, grid, dt = entry
        return StudyRow(value, grid.cells, dt, single_run(spec, grid, dt))

    if spec.threads > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=spec.threads) as pool:
            return list(pool.map(one, entries))
    return [one(e) for e in entries]


def _fit(xs: Sequence[float], rows: Sequence[StudyRow]) -> dict[str, float] | None:
    if any(r.errors is None for r in rows):
        return None
    return {name: fit_order(xs, [r.errors[j] for r in rows]) for j, name in enumerate(NORMS)}


def _require_case(spec: StudySpec) -> StudySpec:
    if spec.case is None:
        return replace(spec, case="3d" if spec.dim == 3 else "1d")
    return spec


def run_converge_time(spec: StudySpec) -> StudyReport:
    spec = _require_case(spec)
    rows = _run_ladder(spec)
    return StudyReport(spec, rows, orders=_fit(spec.ladder, rows))


def run_converge_space(spec: StudySpec) -> StudyReport:
    spec = _require_case(spec)
    rows = _run_ladder(spec)
    return StudyReport(spec, rows, orders=_fit([1.0 / r.cells[0] for r in rows], rows))


def run_coupled_3d(spec: StudySpec) -> StudyReport:
    spec = _require_case(replace(spec, coupled=True))
    rows = _run_ladder(spec)
    return StudyReport(spec, rows, orders=_fit([r.dt for r in rows], rows),
                       orders_space=_fit([1.0 / r.cells[0] for r in rows], rows))


def run_norm_test(spec: StudySpec) -> StudyReport:
    """Zero-source runs from a catalog state; the report's drift is the metric."""
    spec = replace(spec, case=None)
    return StudyReport(spec, _run_ladder(spec))


def run_compare(spec: StudySpec) -> StudyReport:
    """Run ``compare_scheme`` and ``scheme`` from the same state and diff the finals."""
    spec = replace(spec, case=None)
    grid = Grid(spec.grid)
    runs = [single_run(spec, grid, spec.dt, s) for s in (spec.compare_scheme, spec.scheme)]
    report = StudyReport(spec, [StudyRow(spec.dt, grid.cells, spec.dt, r) for r in runs])
    report.snapshots = {"initial": ic(spec.ic, grid), "baseline": runs[0].final, "proposed": runs[1].final}
    if report.ok:
        report.discrepancy = float(np.max(np.abs(runs[0].final.values - runs[1].final.values)))
    return report


def run_single(spec: StudySpec) -> StudyReport:
    grid = Grid(spec.grid)
    run = single_run(spec, grid, spec.dt)
    report = StudyReport(spec, [StudyRow(spec.dt, grid.cells, spec.dt, run)])
    report.snapshots = {"final": run.final}
    return report


_DISPATCH = {
    "single-run": run_single,
    "converge-time": run_converge_time,
    "converge-space": run_converge_space,
    "coupled-3d": run_coupled_3d,
    "norm-test": run_norm_test,
    "compare": run_compare,
}


def run_study(spec: StudySpec) -> StudyReport:
    return _DISPATCH[spec.kind](spec)
