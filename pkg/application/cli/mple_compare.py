## application/cli/mple_compare.py
from __future__ import annotations
from pathlib import Path
import argparse
import logging

from application.mple_comparison_service import MpleComparisonService
from application.ports import MpleComparisonConfig
from domain.errors import PointProcessError
from infrastructure.config.log_setup import add_logging_args, configure_logging
from infrastructure.repositories.local_study_repository import LocalStudyRepository


def main(argv=None):
    ap = argparse.ArgumentParser(description="Conditional vs unconditional Strauss MPLE of gamma.")
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--gamma", type=float, default=None, help="fix gamma instead of drawing it from U[0.01, 1]")
    ap.add_argument("--max-workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None)
    add_logging_args(ap)
    args = ap.parse_args(argv)

    configure_logging(args.verbose, args.quiet)
    cfg = MpleComparisonConfig(n_reps=args.reps, seed=args.seed, fixed_gamma=args.gamma, max_workers=args.max_workers)
    repo = LocalStudyRepository(args.out)
    try:
        summary = MpleComparisonService(repo, logger=logging.getLogger("estimation.compare"), log_every=args.log_every).run(cfg)
    except PointProcessError as e:
        raise SystemExit(f"mple-compare: {e}")
    print(
        f"mean |diff| = {summary['mean_abs_diff']:.5f}, max |diff| = {summary['max_abs_diff']:.5f} "
        f"over {summary['n_reps']} reps ({summary['n_failed']} failed)"
    )


if __name__ == "__main__":
    main()
