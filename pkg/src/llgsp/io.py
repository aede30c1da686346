"""Configuration files, table CSVs, run manifests and field snapshots.

Configurations are flat JSON objects whose keys are the :class:`StudySpec`
fields plus ``out``.  Tables are CSV with shortest round-trip floats; 3D
snapshots are legacy-ASCII VTK with 17 significant digits so they re-read
exactly.
"""

from __future__ import annotations

import csv
import json
import math
import numbers
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .grid import Grid, VectorField
from .harness import KINDS, NORMS, StudyReport, StudySpec
from .manufactured import CASES, INITIAL_CONDITIONS
from .schemes import Scheme

PRESET_PACKAGE = "llgsp.presets"


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    study: StudySpec
    out: str = "out"


_SPEC_FIELDS = {f.name: f for f in fields(StudySpec)}
_KEYS = set(_SPEC_FIELDS) | {"out"}


def _number(key, v, *, positive=False, nonneg=False):
    if isinstance(v, bool) or not isinstance(v, numbers.Real) or not math.isfinite(v):
        raise ConfigError(key, f"expected a finite number, got {v!r}")
    if positive and not v > 0:
        raise ConfigError(key, f"must be positive, got {v!r}")
    if nonneg and v < 0:
        raise ConfigError(key, f"must be non-negative, got {v!r}")
    return float(v)


def _integer(key, v, minimum):
    if isinstance(v, bool) or not isinstance(v, numbers.Integral):
        raise ConfigError(key, f"expected an integer, got {v!r}")
    if v < minimum:
        raise ConfigError(key, f"must be at least {minimum}, got {v!r}")
    return int(v)


def _choice(key, v, options):
    if v not in options:
        raise ConfigError(key, f"unknown value {v!r}; choose from {sorted(options)}")
    return v


def _list(key, v):
    if not isinstance(v, list):
        raise ConfigError(key, f"expected a list, got {v!r}")
    return v


def _validate(key: str, v):
    if key in ("dt", "t_final", "epsilon", "tol"):
        return _number(key, v, positive=True)
    if key in ("alpha", "q"):
        return _number(key, v, nonneg=True)
    if key == "threads":
        return _integer(key, v, 1)
    if key == "kind":
        return _choice(key, v, KINDS)
    if key in ("scheme", "compare_scheme"):
        return _choice(key, v, {s.value for s in Scheme})
    if key == "solver":
        return _choice(key, v, {"dct", "cg"})
    if key == "ic":
        return _choice(key, v, set(INITIAL_CONDITIONS))
    if key == "case":
        return None if v is None else _choice(key, v, set(CASES))
    if key == "coupled":
        if not isinstance(v, bool):
            raise ConfigError(key, f"expected true or false, got {v!r}")
        return v
    if key == "out":
        if not isinstance(v, str) or not v:
            raise ConfigError(key, f"expected a non-empty path string, got {v!r}")
        return v
    if key == "grid":
        items = _list(key, v)
        return tuple(_integer(f"{key}[{i}]", n, 2) for i, n in enumerate(items))
    if key == "ladder":
        items = _list(key, v)
        return tuple(_number(f"{key}[{i}]", x, positive=True) for i, x in enumerate(items))
    if key == "applied":
        items = _list(key, v)
        if len(items) != 3:
            raise ConfigError(key, "expected three components")
        return tuple(_number(f"{key}[{i}]", x) for i, x in enumerate(items))
    raise ConfigError(key, "unknown key")


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("<root>", "configuration must be a JSON object")
    for key in data:
        if key not in _KEYS:
            raise ConfigError(key, f"unknown key; allowed keys are {sorted(_KEYS)}")
    values = {k: _validate(k, v) for k, v in data.items()}
    out = values.pop("out", "out")
    try:
        spec = StudySpec(**values)
    except ValueError as exc:
        msg = str(exc)
        head = msg.split(":", 1)[0]
        raise ConfigError(head if head in _KEYS else "<root>", msg.split(": ", 1)[-1]) from None
    return RunConfig(spec, out)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON configuration.

    Missing keys take the :class:`StudySpec` defaults, so ``{}`` is a
    single run of the damped scheme.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"malformed JSON: {exc}") from None
    return config_from_dict(data)


def config_to_dict(cfg: RunConfig) -> dict:
    d = asdict(cfg.study)
    for key in ("ladder", "grid", "applied"):
        d[key] = list(d[key])
    d["out"] = cfg.out
    return d


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"


def preset_names() -> list[str]:
    root = resources.files(PRESET_PACKAGE)
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_config(ref: str) -> RunConfig:
    """Load a config from a file path or a bundled preset name (with or without ``.json``)."""
    path = Path(ref)
    if path.is_file():
        return parse_config(path.read_text(encoding="utf-8"))
    name = ref[:-5] if ref.endswith(".json") else ref
    if "/" not in name and name in preset_names():
        return parse_config(resources.files(PRESET_PACKAGE).joinpath(name + ".json").read_text(encoding="utf-8"))
    raise ConfigError("config", f"no such file or preset: {ref!r}")


# -- tables -----------------------------------------------------------------

def _fmt(v) -> str:
    return repr(float(v))


def table_rows(report: StudyReport) -> tuple[list[str], list[list[str]]]:
    """Header and body of the study table; divergent norm cells are ``-``."""
    kind = report.spec.kind
    coupled = kind == "coupled-3d"
    if kind == "norm-test":
        header = ["k", "h", "max_norm_drift"]
        body = [[_fmt(r.dt), _fmt(1.0 / r.cells[0]), "-" if r.diverged else _fmt(r.run.max_drift)]
                for r in report.rows]
        return header, body
    if kind == "compare":
        header = ["scheme", "k", "max_norm_drift", "linf_discrepancy"]
        names = [report.spec.compare_scheme, report.spec.scheme]
        disc = "-" if report.discrepancy is None else _fmt(report.discrepancy)
        body = [[n, _fmt(r.dt), "-" if r.diverged else _fmt(r.run.max_drift), disc]
                for n, r in zip(names, report.rows)]
        return header, body
    lead = ["k", "h"] if coupled else (["h"] if kind == "converge-space" else ["k"])
    header = lead + list(NORMS)
    body = []
    for r in report.rows:
        if coupled:
            cells = [_fmt(r.dt), _fmt(1.0 / r.cells[0])]
        elif kind == "converge-space":
            cells = [_fmt(1.0 / r.cells[0])]
        else:
            cells = [_fmt(r.dt)]
        errs = r.errors
        body.append(cells + (["-"] * 3 if errs is None else [_fmt(e) for e in errs]))
    pad = [""] * (len(lead) - 1)
    if kind in ("converge-time", "converge-space", "coupled-3d"):
        fits = [("order(k)", report.orders), ("order(h)", report.orders_space)] if coupled \
            else [("order", report.orders)]
        for label, orders in fits:
            vals = ["-"] * 3 if orders is None else [_fmt(orders[n]) for n in NORMS]
            body.append([label] + pad + vals)
    return header, body


def emit_table_csv(report: StudyReport, path) -> bool:
    """Write the study table; returns ``False`` (header only) for an empty study."""
    header, body = table_rows(report)
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        if report.rows:
            w.writerows(body)
    return bool(report.rows)


# -- snapshots --------------------------------------------------------------

def _g17(v: float) -> str:
    return "%.17g" % v


def emit_vtk(field: VectorField, path, title: str = "llgsp magnetization") -> None:
    """Legacy-ASCII STRUCTURED_POINTS file with vectors ``m`` and scalars ``angle``."""
    grid = field.grid
    dims = list(grid.cells) + [1] * (3 - grid.dim)
    spacing = list(grid.spacing) + [1.0] * (3 - grid.dim)
    origin = [h / 2 for h in grid.spacing] + [0.0] * (3 - grid.dim)
    # VTK wants x varying fastest
    m = field.values.reshape(3, -1, order="F")
    angle = np.arctan2(m[1], m[0])
    lines = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        "DIMENSIONS " + " ".join(str(d) for d in dims),
        "ORIGIN " + " ".join(_g17(o) for o in origin),
        "SPACING " + " ".join(_g17(s) for s in spacing),
        f"POINT_DATA {grid.size}",
        "VECTORS m double",
    ]
    lines += [f"{_g17(a)} {_g17(b)} {_g17(c)}" for a, b, c in m.T]
    lines += ["SCALARS angle double 1", "LOOKUP_TABLE default"]
    lines += [_g17(a) for a in angle]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_vtk(path) -> VectorField:
    """Read back a file written by :func:`emit_vtk`."""
    tokens = Path(path).read_text(encoding="utf-8").splitlines()
    dims = None
    i = 0
    while i < len(tokens):
        line = tokens[i].strip()
        if line.startswith("DIMENSIONS"):
            dims = [int(v) for v in line.split()[1:]]
        if line.startswith("VECTORS"):
            break
        i += 1
    if dims is None or i == len(tokens):
        raise ValueError(f"{path}: not a structured-points vector file")
    n = int(np.prod(dims))
    data = np.array([[float(v) for v in tokens[i + 1 + j].split()] for j in range(n)])
    # trailing singleton axes were padding for lower-dimensional grids
    while len(dims) > 1 and dims[-1] == 1:
        dims = dims[:-1]
    values = data.T.reshape((3, *dims), order="F")
    return VectorField(Grid(tuple(dims)), values)


def emit_profile_csv(field: VectorField, path) -> None:
    """Columns ``x, m1, m2, m3`` for a 1D field."""
    if field.grid.dim != 1:
        raise ValueError("profile CSV needs a 1D field")
    x = field.grid.axis_nodes(0)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "m1", "m2", "m3"])
        for xi, (a, b, c) in zip(x, field.values.T):
            w.writerow([_fmt(xi), _fmt(a), _fmt(b), _fmt(c)])


def emit_snapshot(field: VectorField, stem) -> Path:
    """Profile CSV for 1D fields, VTK otherwise; returns the written path."""
    stem = Path(stem)
    if field.grid.dim == 1:
        path = stem.with_suffix(".csv")
        emit_profile_csv(field, path)
    else:
        path = stem.with_suffix(".vtk")
        emit_vtk(field, path)
    return path


def write_manifest(path, cfg: RunConfig, report: StudyReport, files: list[str], status: str) -> None:
    doc = {
        "version": __version__,
        "status": status,
        "config": config_to_dict(cfg),
        "report": report.summary(),
        "files": files,
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n",
                          encoding="utf-8")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")
