## application/cli/fit.py
from __future__ import annotations
from pathlib import Path
import argparse
import logging

from application.fitting_service import FittingService
from domain.errors import PointProcessError
from domain.services.model_fitting import FIT_MODELS
from infrastructure.config.log_setup import add_logging_args, configure_logging
from infrastructure.repositories.csv_pattern_repository import CsvPatternRepository


def main(argv=None):
    ap = argparse.ArgumentParser(description="Fit a model to one pattern.")
    ap.add_argument("--model", choices=list(FIT_MODELS), required=True)
    ap.add_argument("--in", dest="in_path", type=Path, required=True)
    g = ap.add_mutually_exclusive_group()
    g.add_argument("--R", type=float, default=None, help="Strauss interaction radius")
    g.add_argument("--profile-R", action="store_true", help="profile the pseudo-likelihood over R")
    ap.add_argument("--quad-resolution", type=int, default=256)
    ap.add_argument("--out", type=Path, required=True)
    add_logging_args(ap)
    args = ap.parse_args(argv)

    configure_logging(args.verbose, args.quiet)
    if args.model == "strauss" and args.R is None and not args.profile_R:
        ap.error("strauss needs --R or --profile-R")
    svc = FittingService(CsvPatternRepository(), logger=logging.getLogger("estimation"))
    try:
        fit = svc.run(args.model, args.in_path, args.out, R=args.R, quad_resolution=args.quad_resolution)
    except PointProcessError as e:
        raise SystemExit(f"fit: {e}")
    print("Fit", fit.params, "→", args.out)


if __name__ == "__main__":
    main()
