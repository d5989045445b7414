## application/cli/simulate.py
from __future__ import annotations
from pathlib import Path
import argparse
import logging

from application.ports import SamplerOptions, SimulateConfig
from application.simulation_service import SimulationService
from domain.errors import PointProcessError
from domain.models.window import Window
from infrastructure.config.log_setup import add_logging_args, configure_logging
from infrastructure.config.paths import RunPaths
from infrastructure.config.toml_config import chain_config_from, load_model_params, read_toml
from infrastructure.repositories.csv_pattern_repository import CsvPatternRepository


def main(argv=None):
    ap = argparse.ArgumentParser(description="Simulate point patterns, optionally conditioned on N(W) = n.")
    ap.add_argument("--model", choices=["poisson", "lgcp", "strauss", "dpp"], required=True)
    ap.add_argument("--params", type=Path, required=True, help="TOML file with a [<model>] section (and optional [chain])")
    ap.add_argument("--condition-n", type=int, default=None)
    ap.add_argument("--reps", type=int, default=1)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None, help="pattern directory (default: the per-user runs patterns directory)")
    ap.add_argument("--window", type=float, nargs=4, metavar=("XMIN", "XMAX", "YMIN", "YMAX"), default=(0.0, 1.0, 0.0, 1.0))
    ap.add_argument("--field-grid", type=int, default=64, help="LGCP field cells per side")
    ap.add_argument("--max-attempts", type=int, default=100_000)
    ap.add_argument("--max-workers", type=int, default=1)
    add_logging_args(ap)
    args = ap.parse_args(argv)

    configure_logging(args.verbose, args.quiet)
    logger = logging.getLogger("simulate")

    try:
        _, params = load_model_params(args.params, args.model)
        options = SamplerOptions(
            window=Window(*args.window),
            chain=chain_config_from(read_toml(args.params)),
            field_grid=args.field_grid,
            max_attempts=args.max_attempts,
        )
        cfg = SimulateConfig(reps=args.reps, seed=args.seed, condition_n=args.condition_n, max_workers=args.max_workers)
        svc = SimulationService(CsvPatternRepository(), logger=logger, log_every=args.log_every)
        meta = svc.run(params, options, cfg, args.out or RunPaths.from_root().patterns)
    except PointProcessError as e:
        raise SystemExit(f"simulate: {e}")
    print("Patterns →", meta["outputs"]["patterns_dir"])


if __name__ == "__main__":
    main()
