## infrastructure/repositories/local_study_repository.py

from __future__ import annotations
from pathlib import Path
import json
from typing import Any

import pandas as pd

from infrastructure.config.paths import RunPaths


class LocalStudyRepository:
    """Study, table and comparison outputs under one run directory."""

    def __init__(self, root: Path | None = None) -> None:
        self.paths = RunPaths.from_root(root).ensure()
        self.root = self.paths.root

    def save_rows(self, df: pd.DataFrame) -> Path:
        df.to_csv(self.paths.rows_csv, index=False, float_format="%.17g")
        return self.paths.rows_csv

    def save_qq(self, df: pd.DataFrame) -> Path:
        df.to_csv(self.paths.qq_csv, index=False, float_format="%.17g")
        return self.paths.qq_csv

    def save_table1(self, df: pd.DataFrame) -> Path:
        df.to_csv(self.paths.table1_csv, index=False, float_format="%.17g")
        return self.paths.table1_csv

    def save_mple(self, df: pd.DataFrame) -> Path:
        df.to_csv(self.paths.mple_csv, index=False, float_format="%.17g")
        return self.paths.mple_csv

    def save_mple_summary(self, payload: Any) -> Path:
        self.paths.mple_summary.write_text(json.dumps(payload, indent=2), encoding="utf-8")
        return self.paths.mple_summary

    def save_manifest(self, payload: Any) -> Path:
        self.paths.manifest.write_text(json.dumps(payload, indent=2, default=str), encoding="utf-8")
        return self.paths.manifest
