# infrastructure/reporting/envelope_report_writer.py

from __future__ import annotations
import json
from pathlib import Path
from typing import Dict

import numpy as np
import pandas as pd

from domain.models.envelope import Envelope


class CsvJsonEnvelopeWriter:
    """
    Persist one envelope test as `r,lo,hi,obs` CSV plus a JSON summary next to it
    (same stem, `.json`).
    """

    def write(self, e: Envelope, area: float, out_csv: Path) -> Dict[str, str]:
        out_csv = Path(out_csv)
        out_csv.parent.mkdir(parents=True, exist_ok=True)
        mask = e.lower.defined
        df = pd.DataFrame(
            {
                "r": e.lower.r,
                "lo": np.where(mask, e.lower.values, np.nan),
                "hi": np.where(mask, e.upper.values, np.nan),
                "obs": np.where(mask, e.observed.values, np.nan),
            }
        )
        df.to_csv(out_csv, index=False, float_format="%.17g")

        summary = {
            "p_value": e.p_value,
            "alpha": e.alpha,
            "area": area,
            "data_inside": e.data_inside,
            "n_sims": e.n_sims,
            "statistic": e.lower.kind,
        }
        out_json = out_csv.with_suffix(".json")
        out_json.write_text(json.dumps(summary, indent=2), encoding="utf-8")
        return {"csv": str(out_csv), "json": str(out_json)}
