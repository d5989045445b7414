#infrastructure/config/log_setup.py
from __future__ import annotations
import logging

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


def level_for(verbose: int, quiet: bool = False) -> int:
    if quiet:
        return logging.WARNING
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    return logging.WARNING


def configure_logging(verbose: int = 1, quiet: bool = False) -> int:
    """-v INFO (default), -vv DEBUG, -q WARNING."""
    level = level_for(verbose, quiet)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)
    return level


def add_logging_args(ap) -> None:
    ap.add_argument("--verbose", "-v", action="count", default=1, help="-v INFO, -vv DEBUG")
    ap.add_argument("--quiet", "-q", action="store_true", help="only warnings and errors")
    ap.add_argument("--log-every", type=int, default=10, help="log progress every N replications")
