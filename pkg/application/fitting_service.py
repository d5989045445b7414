# application/fitting_service.py
from __future__ import annotations
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence
import json
import logging
import math

from application.ports import PatternRepository
from application.version import __version__
from domain.models.fit_result import FitResult
from domain.models.rgrid import RGrid
from domain.services.model_fitting import fit_model
from domain.services.pseudo_likelihood import DEFAULT_QUAD_RESOLUTION, PROFILE_R_GRID


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class FittingService:
    def __init__(self, patterns: PatternRepository, logger: Optional[logging.Logger] = None) -> None:
        self.patterns = patterns
        self.log = logger or logging.getLogger("estimation")

    def run(
        self,
        model: str,
        in_path: Path,
        out_path: Path,
        R: Optional[float] = None,
        R_grid: Sequence[float] = PROFILE_R_GRID,
        quad_resolution: int = DEFAULT_QUAD_RESOLUTION,
        rgrid: Optional[RGrid] = None,
    ) -> FitResult:
        x = self.patterns.read(in_path)
        self.log.info("Fitting %s to %d points from %s", model, x.n, in_path)
        fit = fit_model(x, model, rgrid=rgrid, R=R, R_grid=R_grid, quad_resolution=quad_resolution)
        payload = {
            "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "version": __version__,
            "input": str(in_path),
            "n_points": x.n,
            "fit": _jsonable(asdict(fit)),
        }
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
        self.log.info("Fit %s: %s%s", model, fit.params, " (excluded)" if fit.excluded else "")
        return fit
