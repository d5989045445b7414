# infrastructure/repositories/csv_curve_repository.py

from __future__ import annotations
from pathlib import Path
from typing import List, Optional

import pandas as pd

from domain.errors import InvalidParameter
from domain.models.curve import CURVE_KINDS, Curve
from domain.models.rgrid import RGrid

KIND_TAG = "# curve"


class CsvCurveRepository:
    """Curves as CSV `r,value,defined`, preceded by a `# curve <kind>` line."""

    def write(self, c: Curve, path: Path, extra: Optional[dict] = None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        df = pd.DataFrame({"r": c.r, "value": c.values, "defined": c.defined.astype(int)})
        for name, values in (extra or {}).items():
            df[name] = values
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(f"{KIND_TAG} {c.kind}\n")
            df.to_csv(fh, index=False, float_format="%.17g")
        return path

    def read(self, path: Path, kind: Optional[str] = None) -> Curve:
        path = Path(path)
        with path.open("r", encoding="utf-8") as fh:
            first = fh.readline().strip()
        skip = 0
        if first.startswith(KIND_TAG):
            kind = first[len(KIND_TAG):].strip() or kind
            skip = 1
        if kind not in CURVE_KINDS:
            raise InvalidParameter(f"{path}: curve kind unknown (got {kind!r})")
        df = pd.read_csv(path, skiprows=skip, float_precision="round_trip")
        missing = {"r", "value"} - set(df.columns)
        if missing:
            raise InvalidParameter(f"{path}: missing columns {sorted(missing)}")
        defined = df["defined"].astype(bool).to_numpy() if "defined" in df.columns else None
        return Curve(RGrid(df["r"].to_numpy(dtype=float)), df["value"].to_numpy(dtype=float), kind, defined)

    def read_dir(self, directory: Path, kind: Optional[str] = None) -> List[Curve]:
        files = sorted(Path(directory).glob("*.csv"))
        if not files:
            raise InvalidParameter(f"no curve CSVs in {directory}")
        return [self.read(p, kind) for p in files]
