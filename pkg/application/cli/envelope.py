## application/cli/envelope.py
from __future__ import annotations
from pathlib import Path
import argparse
import logging

from application.envelope_service import EnvelopeService
from domain.errors import PointProcessError
from infrastructure.config.log_setup import add_logging_args, configure_logging
from infrastructure.reporting.envelope_report_writer import CsvJsonEnvelopeWriter
from infrastructure.repositories.csv_curve_repository import CsvCurveRepository


def main(argv=None):
    ap = argparse.ArgumentParser(description="Global extreme-rank-length envelope test.")
    ap.add_argument("--data", type=Path, required=True, help="curve CSV of the data")
    ap.add_argument("--sims", type=Path, required=True, help="directory of simulated curve CSVs")
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--out", type=Path, required=True)
    add_logging_args(ap)
    args = ap.parse_args(argv)

    configure_logging(args.verbose, args.quiet)
    svc = EnvelopeService(CsvCurveRepository(), CsvJsonEnvelopeWriter(), logger=logging.getLogger("envelopes"))
    try:
        res = svc.run(args.data, args.sims, args.alpha, args.out)
    except PointProcessError as e:
        raise SystemExit(f"envelope: {e}")
    print(f"p-value: {res['p_value']:.6g}")


if __name__ == "__main__":
    main()
