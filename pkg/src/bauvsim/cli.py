"""Command-line interface.

Subcommands:
    run       single trial from the base config, trajectory CSV + metrics line
    sweep     full look-ahead/guidance/amplitude protocol with artifacts
    path      emit the reference waypoints as CSV
    validate  parse and check a config file

Exit codes: 0 success, 1 config error, 2 trial divergence, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import config as cfgmod
from . import metrics, pathgen, sweep
from .errors import ConfigError
from .simcore import TrialDiverged, run_trial

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bauvsim",
        description="Planar path-following simulator for a multi-link swimming robot",
    )
    parser.add_argument("--config", metavar="PATH", help="YAML config file (defaults if omitted)")
    parser.add_argument("--out", metavar="DIR", default="results", help="output directory")
    parser.add_argument("--jobs", type=int, default=1, metavar="N", help="parallel trials for sweep")
    parser.add_argument("--seed", type=int, default=None, metavar="INT", help="override rng seed")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", help="run a single trial with the base configuration")
    sub.add_parser("sweep", help="run the full experiment sweep")
    sub.add_parser("path", help="write the reference waypoints to CSV")
    sub.add_parser("validate", help="check the configuration and exit")
    return parser


def _load_spec(args: argparse.Namespace) -> cfgmod.SweepSpec:
    spec = cfgmod.load_config(args.config) if args.config else cfgmod.default_spec()
    if args.seed is not None:
        spec = replace(spec, base=replace(spec.base, rng_seed=args.seed))
    return spec


def _cmd_validate(spec: cfgmod.SweepSpec) -> int:
    n_cells = (
        len(spec.delta_multiples) * len(spec.guidance_modes) * len(spec.amplitude_modes)
    )
    print(
        f"config OK: {n_cells} sweep cells, dt={spec.base.dt} s, "
        f"t_max={spec.base.t_max} s, delta={spec.base.guidance.delta:.4g} m"
    )
    return EXIT_OK


def _cmd_path(spec: cfgmod.SweepSpec, out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    waypoints = pathgen.generate(spec.base.path_spec)
    target = out_dir / "waypoints.csv"
    with target.open("w") as stream:
        pathgen.write_waypoints_csv(waypoints, stream)
    print(f"wrote {target}")
    return EXIT_OK


def _cmd_run(spec: cfgmod.SweepSpec, out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    result = run_trial(spec.base)
    target = out_dir / "trial.csv"
    with target.open("w") as stream:
        result.log.write_csv(stream)
    sim_seconds = result.log.rows[-1][0] if result.log.rows else 0.0
    print(
        f"trial: completed={str(result.completed).lower()} "
        f"rmse={result.rmse:.4f} m mae={result.mae:.4f} m "
        f"sim={sim_seconds:.1f} s wall={result.wall_time:.2f} s"
    )
    print(f"wrote {target}")
    return EXIT_OK


def _cmd_sweep(spec: cfgmod.SweepSpec, out_dir: Path, jobs: int) -> int:
    outcome = sweep.run_sweep(spec, out_dir, jobs=jobs)
    print(outcome.table_text)
    for key, message in outcome.failures:
        print(
            f"FAILED cell ({key.guidance_mode}, {key.amplitude_mode}, "
            f"{key.delta_multiple}): {message}"
        )
    total_wall = sum(
        r.wall_time for _, r in outcome.results if r is not None and r.wall_time
    )
    print(f"wrote {len(outcome.files)} files to {out_dir} (total trial wall {total_wall:.1f} s)")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out_dir = Path(args.out)
    try:
        spec = _load_spec(args)
        if args.command == "validate":
            return _cmd_validate(spec)
        if args.command == "path":
            return _cmd_path(spec, out_dir)
        if args.command == "run":
            return _cmd_run(spec, out_dir)
        if args.command == "sweep":
            return _cmd_sweep(spec, out_dir, max(1, args.jobs))
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except TrialDiverged as err:
        print(f"trial diverged: {err}", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
