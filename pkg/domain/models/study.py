# domain/models/study.py
from __future__ import annotations
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

from domain.errors import InvalidParameter
from domain.models.model_params import ModelParams, model_name

DELTA_EXCLUDE_AT = 0.3    # LGCP fits with delta >= this are excluded
KAPPA_EXCLUDE_BELOW = 0.001  # DPP fits with kappa < this are excluded


@dataclass(frozen=True)
class StudyConfig:
    true_params: ModelParams
    n_data: int = 100
    n_env: int = 499
    conditional: Tuple[bool, ...] = (True, False)
    statistics: Tuple[str, ...] = ("F", "G", "J", "K")
    param_sources: Tuple[str, ...] = ("true",)   # subset of {"true", "fitted"}
    seed: int = 1
    out_dir: Optional[Path] = None
    alpha: float = 0.05
    delta_exclude_at: float = DELTA_EXCLUDE_AT
    kappa_exclude_below: float = KAPPA_EXCLUDE_BELOW
    max_workers: int = 1
    max_attempts: int = 100_000
    log_every: int = 10
    field_grid: int = 64
    f_resolution: int = 128
    r_max: float = 0.25
    r_count: int = 513

    def __post_init__(self) -> None:
        if self.n_data < 1:
            raise InvalidParameter("n_data must be >= 1")
        if self.n_env < 39:
            raise InvalidParameter("n_env must be >= 39 so that a 5% test is possible")
        if not self.conditional or any(not isinstance(c, bool) for c in self.conditional):
            raise InvalidParameter("conditional must be a non-empty tuple of booleans")
        bad = [s for s in self.statistics if s not in ("K", "F", "G", "J")]
        if not self.statistics or bad:
            raise InvalidParameter(f"statistics must be a non-empty subset of K, F, G, J (bad: {bad})")
        bad = [s for s in self.param_sources if s not in ("true", "fitted")]
        if not self.param_sources or bad:
            raise InvalidParameter(f"param_sources must be a non-empty subset of true, fitted (bad: {bad})")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameter("alpha must lie in (0, 1)")

    @property
    def model(self) -> str:
        return model_name(self.true_params)


@dataclass
class StudyRow:
    replication: int
    statistic: str
    conditional: bool
    param_source: str           # "true" or "fitted"
    n_data_points: int
    envelope_area: Optional[float]
    p_value: Optional[float]
    fitted_params: str          # JSON-encoded mapping, "" when not fitted
    excluded: bool = False
    error: str = ""
    sim_counts_match: Optional[bool] = None  # conditional rows: every simulation had N(W) = data count
