# domain/services/model_fitting.py
from __future__ import annotations
import logging
from typing import Optional, Sequence

from domain.errors import InvalidParameter
from domain.models.fit_result import FitResult
from domain.models.model_params import ModelParams, params_from_mapping
from domain.models.point_pattern import PointPattern
from domain.models.rgrid import RGrid
from domain.models.study import DELTA_EXCLUDE_AT, KAPPA_EXCLUDE_BELOW
from domain.services.minimum_contrast import fit_intensity, fit_minimum_contrast
from domain.services.pseudo_likelihood import (
    DEFAULT_QUAD_RESOLUTION,
    PROFILE_R_GRID,
    mple_strauss,
    mple_strauss_conditional,
    profile_mple_R,
)

log = logging.getLogger("estimation")

FIT_MODELS = ("poisson", "lgcp", "strauss", "strauss-cond", "dpp")


def fit_model(
    x: PointPattern,
    model: str,
    rgrid: Optional[RGrid] = None,
    R: Optional[float] = None,
    R_grid: Sequence[float] = PROFILE_R_GRID,
    quad_resolution: int = DEFAULT_QUAD_RESOLUTION,
    delta_exclude_at: float = DELTA_EXCLUDE_AT,
    kappa_exclude_below: float = KAPPA_EXCLUDE_BELOW,
) -> FitResult:
    """
    Fit `model` the usual way for it and flag fits that fail the exclusion thresholds.

    poisson: rho-hat; lgcp, dpp: minimum contrast on K; strauss: MPLE at R, or the
    R-profile when R is None; strauss-cond: conditional MPLE at R (default 0.05).
    """
    if model == "poisson":
        rho = fit_intensity(x).rho
        return FitResult("poisson", {"rho": rho}, objective=0.0, converged=True, iterations=0)
    if model in ("lgcp", "dpp"):
        fit = fit_minimum_contrast(x, model, rgrid or RGrid.linear())
        if model == "lgcp" and fit.params["delta"] >= delta_exclude_at:
            fit.excluded = True
        if model == "dpp" and fit.params["kappa"] < kappa_exclude_below:
            fit.excluded = True
        if fit.excluded:
            log.info("fit excluded by threshold: %s", fit.params)
        return fit
    if model == "strauss":
        return profile_mple_R(x, R_grid, quad_resolution) if R is None else mple_strauss(x, R, quad_resolution)
    if model == "strauss-cond":
        return mple_strauss_conditional(x, 0.05 if R is None else R, quad_resolution)
    raise InvalidParameter(f"unknown model {model!r} (expected one of {FIT_MODELS})")


def params_from_fit(fit: FitResult) -> ModelParams:
    """Parameter container for simulating from a fitted model."""
    model = "strauss" if fit.model == "strauss-cond" else fit.model
    return params_from_mapping(model, dict(fit.params))
