## application/cli/study.py
from __future__ import annotations
from dataclasses import replace
from pathlib import Path
import argparse
import logging

from application.study_service import StudyService
from domain.errors import PointProcessError
from infrastructure.config.log_setup import add_logging_args, configure_logging
from infrastructure.config.toml_config import load_study_config
from infrastructure.repositories.local_study_repository import LocalStudyRepository


def main(argv=None):
    ap = argparse.ArgumentParser(description="Envelope study: conditional vs unconditional simulation.")
    ap.add_argument("--config", type=Path, required=True, help="study TOML ([study], one model section, optional [chain])")
    ap.add_argument("--out", type=Path, default=None, help="run directory (default: per-user data dir)")
    ap.add_argument("--max-workers", type=int, default=None, help="override [study].max_workers")
    add_logging_args(ap)
    args = ap.parse_args(argv)

    configure_logging(args.verbose, args.quiet)
    logger = logging.getLogger("study")
    try:
        cfg, chain = load_study_config(args.config, out_dir=args.out)
        if args.max_workers is not None:
            cfg = replace(cfg, max_workers=args.max_workers)
        repo = LocalStudyRepository(cfg.out_dir)
        rows = StudyService(repo, logger=logger, log_every=args.log_every).run(cfg, chain)
    except PointProcessError as e:
        raise SystemExit(f"study: {e}")
    print(f"Study done: {len(rows)} rows →", repo.paths.rows_csv)


if __name__ == "__main__":
    main()
