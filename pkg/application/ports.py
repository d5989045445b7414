from __future__ import annotations
from typing import Protocol, Dict, Any, List, Optional, Tuple
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from domain.models.chain_config import ChainConfig
from domain.models.curve import Curve
from domain.models.envelope import Envelope
from domain.models.point_pattern import PointPattern
from domain.models.rgrid import DEFAULT_R_COUNT, DEFAULT_R_MAX
from domain.models.window import Window

# =========================
# Persistence
# =========================

class PatternRepository(Protocol):
    """Port: read/write point patterns (CSV with a `# window` header line)."""
    def write(self, x: PointPattern, path: Path) -> Path: ...
    def read(self, path: Path) -> PointPattern: ...
    def write_many(self, patterns: List[PointPattern], directory: Path, stem: str = "pattern") -> List[Path]: ...

class CurveRepository(Protocol):
    """Port: read/write summary curves (`r,value,defined`)."""
    def write(self, c: Curve, path: Path, extra: Optional[dict] = None) -> Path: ...
    def read(self, path: Path, kind: Optional[str] = None) -> Curve: ...
    def read_dir(self, directory: Path, kind: Optional[str] = None) -> List[Curve]: ...

class EnvelopeWriter(Protocol):
    """Port: persist one envelope test (CSV band + JSON summary)."""
    def write(self, e: Envelope, area: float, out_csv: Path) -> Dict[str, str]: ...

class StudyRepository(Protocol):
    """Port: persist harness outputs (rows, QQ data, tables, manifest)."""
    def save_rows(self, df: pd.DataFrame) -> Path: ...
    def save_qq(self, df: pd.DataFrame) -> Path: ...
    def save_table1(self, df: pd.DataFrame) -> Path: ...
    def save_mple(self, df: pd.DataFrame) -> Path: ...
    def save_mple_summary(self, payload: Any) -> Path: ...
    def save_manifest(self, payload: Any) -> Path: ...


# =========================
# Use-case configuration
# =========================

@dataclass(frozen=True)
class SamplerOptions:
    """Knobs shared by every sampler call."""
    window: Window = field(default_factory=Window.unit_square)
    chain: ChainConfig = field(default_factory=ChainConfig)
    field_grid: int = 64                 # LGCP field cells per side
    max_attempts: int = 100_000          # conditional LGCP / DPP acceptance-rejection
    dpp_eps: Optional[float] = None      # None -> 1e-6 * rho |W|
    dpp_max_frequency: int = 128

@dataclass(frozen=True)
class SimulateConfig:
    """Configuration for the simulate use case."""
    reps: int = 1
    seed: int = 1
    condition_n: Optional[int] = None
    max_workers: int = 1

@dataclass(frozen=True)
class SummaryConfig:
    r_max: float = DEFAULT_R_MAX
    r_count: int = DEFAULT_R_COUNT
    f_resolution: int = 128

@dataclass(frozen=True)
class Table1Config:
    """Ripley approximation grid, optionally with simulated means."""
    betas: Tuple[float, ...] = (50.0, 200.0)
    gammas: Tuple[float, ...] = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
    R: float = 0.05
    simulate_reps: int = 0               # 0 skips simulation; the CLI default is 5000
    seed: int = 1
    max_workers: int = 1

@dataclass(frozen=True)
class MpleComparisonConfig:
    n_reps: int = 200
    seed: int = 1
    beta: float = 200.0
    R: float = 0.05
    gamma_low: float = 0.01
    gamma_high: float = 1.0
    fixed_gamma: Optional[float] = None  # overrides the uniform draw
    quad_resolution: int = 256
    max_workers: int = 1
