"""Command-line entry point ``llgsp``.

Exit codes: 0 on success, 1 on invalid input or unwritable output, 2 when a
single run diverges.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .harness import StudyReport, run_study
from .io import (ConfigError, RunConfig, config_from_dict, config_to_dict, emit_snapshot,
                 emit_table_csv, load_config, preset_names, write_manifest)
from .manufactured import INITIAL_CONDITIONS

log = logging.getLogger("llgsp")

HELP = {
    "run": "evolve one configuration and write the final state",
    "converge-time": "temporal convergence ladder at fixed grid",
    "converge-space": "spatial convergence ladder at fixed step",
    "converge-3d": "coupled k=h^2 ladder in 3D",
    "norm-test": "pointwise norm drift over a step ladder",
    "compare": "GSPM baseline against the proposed scheme",
}

COMMANDS = {
    "run": "single-run",
    "converge-time": "converge-time",
    "converge-space": "converge-space",
    "converge-3d": "coupled-3d",
    "norm-test": "norm-test",
    "compare": "compare",
}

EXIT_OK, EXIT_INVALID, EXIT_DIVERGED = 0, 1, 2


def _grid(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace("x", ",").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected cell counts like 2000 or 10,10,10, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="llgsp", description="Structure-preserving LLG integrators.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=HELP[name])
        p.add_argument("--config", help="JSON file or bundled preset name")
        p.add_argument("--dt", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--scheme")
        p.add_argument("--grid", type=_grid, help="cells per axis, e.g. 2000 or 10,10,10")
        p.add_argument("--out", help="output directory")
        p.add_argument("--threads", type=int)
    ics = sub.add_parser("list-ics", help="print the initial-condition catalog")
    ics.add_argument("--presets", action="store_true", help="list bundled presets instead")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Config file (or preset) plus command-line overrides; the subcommand fixes the kind."""
    base = load_config(args.config) if args.config else config_from_dict({})
    data = config_to_dict(base)
    data["kind"] = COMMANDS[args.command]
    for key in ("dt", "alpha", "scheme", "grid", "out", "threads"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    return config_from_dict(data)


def _write_outputs(cfg: RunConfig, report: StudyReport) -> list[str]:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = cfg.study.kind
    files = []
    if cfg.study.kind != "single-run":
        table = out / f"{stem}.csv"
        emit_table_csv(report, table)
        files.append(str(table))
    for name, field in report.snapshots.items():
        files.append(str(emit_snapshot(field, out / f"{stem}_{name}")))
    return files


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "list-ics":
        if args.presets:
            print("\n".join(preset_names()))
        else:
            for entry in INITIAL_CONDITIONS.values():
                print(f"{entry.name}\t{entry.min_dim}D+\t{entry.formula}")
        return EXIT_OK
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"llgsp: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        report = run_study(cfg.study)
    except ValueError as exc:
        print(f"llgsp: {exc}", file=sys.stderr)
        return EXIT_INVALID
    diverged = cfg.study.kind == "single-run" and not report.ok
    status = "diverged" if diverged else ("empty" if not report.rows else "ok")
    try:
        files = _write_outputs(cfg, report)
        manifest = Path(cfg.out) / f"{cfg.study.kind}_manifest.json"
        write_manifest(manifest, cfg, report, files, status)
    except OSError as exc:
        print(f"llgsp: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for row in report.rows:
        if row.diverged:
            log.warning("run with dt=%g on %s diverged at step %s: %s", row.dt, row.cells,
                        row.run.divergence_step, row.run.message)
    if diverged:
        print(f"llgsp: run diverged at step {report.rows[0].run.divergence_step}", file=sys.stderr)
        return EXIT_DIVERGED
    if not report.rows:
        return EXIT_INVALID
    print(manifest)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
