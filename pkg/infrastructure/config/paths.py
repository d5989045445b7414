#infrastructure/config/paths.py
from __future__ import annotations
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from platformdirs import user_data_dir

APP_NAME = "pointcond"


def default_runs_root() -> Path:
    return Path(user_data_dir(APP_NAME)) / "runs"


@dataclass
class RunPaths:
    root: Path
    patterns: Path
    curves: Path
    rows_csv: Path
    qq_csv: Path
    manifest: Path
    table1_csv: Path
    mple_csv: Path
    mple_summary: Path

    @classmethod
    def from_root(cls, root: Optional[Path] = None) -> "RunPaths":
        root = Path(root) if root is not None else default_runs_root()
        return cls(
            root=root,
            patterns=root / "patterns",
            curves=root / "curves",
            rows_csv=root / "rows.csv",
            qq_csv=root / "qq.csv",
            manifest=root / "manifest.json",
            table1_csv=root / "table1.csv",
            mple_csv=root / "mple.csv",
            mple_summary=root / "mple_summary.json",
        )

    def ensure(self) -> "RunPaths":
        self.root.mkdir(parents=True, exist_ok=True)
        return self
