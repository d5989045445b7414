# infrastructure/repositories/csv_pattern_repository.py

from __future__ import annotations
from pathlib import Path
from typing import Iterable, List

import pandas as pd

from domain.errors import InvalidParameter
from domain.models.point_pattern import PointPattern
from domain.models.window import Window

WINDOW_TAG = "# window"


class CsvPatternRepository:
    """
    Point patterns as CSV:

        # window xmin xmax ymin ymax
        x,y
        0.12,0.56
        ...
    """

    def write(self, x: PointPattern, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        w = x.window
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(f"{WINDOW_TAG} {w.xmin!r} {w.xmax!r} {w.ymin!r} {w.ymax!r}\n")
            pd.DataFrame(x.points, columns=["x", "y"]).to_csv(fh, index=False, float_format="%.17g")
        return path

    def read(self, path: Path) -> PointPattern:
        path = Path(path)
        with path.open("r", encoding="utf-8") as fh:
            first = fh.readline().strip()
        if not first.startswith(WINDOW_TAG):
            raise InvalidParameter(f"{path}: first line must be '{WINDOW_TAG} xmin xmax ymin ymax'")
        try:
            xmin, xmax, ymin, ymax = (float(v) for v in first[len(WINDOW_TAG):].split())
        except ValueError:
            raise InvalidParameter(f"{path}: malformed window line {first!r}") from None
        df = pd.read_csv(path, skiprows=1, float_precision="round_trip")
        if list(df.columns[:2]) != ["x", "y"]:
            raise InvalidParameter(f"{path}: expected header 'x,y', got {list(df.columns)}")
        return PointPattern(df[["x", "y"]].to_numpy(dtype=float), Window(xmin, xmax, ymin, ymax))

    def write_many(self, patterns: Iterable[PointPattern], directory: Path, stem: str = "pattern") -> List[Path]:
        directory = Path(directory)
        return [self.write(x, directory / f"{stem}_{i:05d}.csv") for i, x in enumerate(patterns)]
