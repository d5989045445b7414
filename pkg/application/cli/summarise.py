## application/cli/summarise.py
from __future__ import annotations
from pathlib import Path
import argparse
import logging

from application.envelope_service import SummaryService
from application.ports import SummaryConfig
from domain.errors import PointProcessError
from domain.models.rgrid import DEFAULT_R_COUNT, DEFAULT_R_MAX
from infrastructure.config.log_setup import add_logging_args, configure_logging
from infrastructure.config.paths import RunPaths
from infrastructure.repositories.csv_curve_repository import CsvCurveRepository
from infrastructure.repositories.csv_pattern_repository import CsvPatternRepository


def main(argv=None):
    ap = argparse.ArgumentParser(description="Border-corrected K, F, G or J estimate for one pattern.")
    ap.add_argument("--stat", choices=["K", "F", "G", "J"], required=True)
    ap.add_argument("--in", dest="in_path", type=Path, required=True)
    ap.add_argument("--out", type=Path, default=None, help="curve CSV (default: <stem>_<stat>.csv in the per-user runs curves directory)")
    ap.add_argument("--r-max", type=float, default=DEFAULT_R_MAX)
    ap.add_argument("--r-count", type=int, default=DEFAULT_R_COUNT)
    ap.add_argument("--f-resolution", type=int, default=128)
    ap.add_argument("--theo", type=float, default=None, metavar="RHO", help="add the Poisson reference column for intensity RHO")
    add_logging_args(ap)
    args = ap.parse_args(argv)

    configure_logging(args.verbose, args.quiet)
    svc = SummaryService(CsvPatternRepository(), CsvCurveRepository(), logger=logging.getLogger("summaries"))
    cfg = SummaryConfig(r_max=args.r_max, r_count=args.r_count, f_resolution=args.f_resolution)
    out = args.out or RunPaths.from_root().curves / f"{args.in_path.stem}_{args.stat}.csv"
    try:
        svc.run(args.stat, args.in_path, out, cfg, theo_rho=args.theo)
    except PointProcessError as e:
        raise SystemExit(f"summarise: {e}")
    print("Curve →", out)


if __name__ == "__main__":
    main()
