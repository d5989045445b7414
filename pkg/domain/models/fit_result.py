# domain/models/fit_result.py
from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any, Dict, Optional


@dataclass
class FitResult:
    model: str
    params: Dict[str, float]            # fitted values, e.g. {"beta": ..., "gamma": ..., "R": ...}
    objective: float                    # contrast (minimized) or pseudo-likelihood (maximized)
    converged: bool
    iterations: int
    gradient: Optional[float] = None    # pseudo-score at the optimum where one exists
    boundary: bool = False              # gamma-hat in {0, 1} or a search bound was hit
    excluded: bool = False              # fails the study's exclusion thresholds
    message: str = ""
    extra: Dict[str, Any] = field(default_factory=dict)
