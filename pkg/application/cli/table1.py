## application/cli/table1.py
from __future__ import annotations
from pathlib import Path
import argparse
import logging

from application.ports import SamplerOptions, Table1Config
from application.table1_service import Table1Service
from domain.models.chain_config import ChainConfig
from infrastructure.config.log_setup import add_logging_args, configure_logging
from infrastructure.repositories.local_study_repository import LocalStudyRepository


def main(argv=None):
    ap = argparse.ArgumentParser(description="Mean Strauss counts on the unit square: approximation vs simulation.")
    ap.add_argument("--simulate", action="store_true", help="add simulated means")
    ap.add_argument("--reps", type=int, default=5000, help="simulations per cell with --simulate")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--burnin", type=int, default=None, help="birth-death proposals; default scales with the expected count")
    ap.add_argument("--max-workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None)
    add_logging_args(ap)
    args = ap.parse_args(argv)

    configure_logging(args.verbose, args.quiet)
    cfg = Table1Config(simulate_reps=args.reps if args.simulate else 0, seed=args.seed, max_workers=args.max_workers)
    repo = LocalStudyRepository(args.out)
    svc = Table1Service(
        repo,
        SamplerOptions(chain=ChainConfig(burnin=args.burnin)),
        logger=logging.getLogger("table1"),
        log_every=max(args.log_every, 1),
    )
    df = svc.run(cfg)
    print(df.to_string(index=False, float_format=lambda v: f"{v:.2f}"))
    print("Table →", repo.paths.table1_csv)


if __name__ == "__main__":
    main()
