# domain/services/minimum_contrast.py
from __future__ import annotations
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import least_squares, minimize, minimize_scalar

from domain.errors import EmptyPattern, InvalidParameter, NoConvergence
from domain.models.curve import Curve
from domain.models.fit_result import FitResult
from domain.models.model_params import DppGaussParams, LgcpParams, PoissonParams
from domain.models.point_pattern import PointPattern
from domain.models.rgrid import RGrid
from domain.services.dpp_model import theoretical_K_dpp
from domain.services.lgcp_model import theoretical_K_lgcp
from domain.services.summary_statistics import estimate_K

log = logging.getLogger("estimation.contrast")

CONTRAST_R_MIN = 0.01
CONTRAST_R_MAX = 0.25
CONTRAST_Q = 0.25
LGCP_BOUNDS = ((1e-3, 20.0), (1e-3, 2.0))  # (sigma2, delta)
KAPPA_MIN = 1e-4


def fit_intensity(x: PointPattern) -> PoissonParams:
    """rho-hat = n(x) / |W|."""
    if x.n == 0:
        raise EmptyPattern("cannot estimate intensity from an empty pattern")
    return PoissonParams(x.n / x.window.area)


def _trapezoid_weights(r: np.ndarray) -> np.ndarray:
    h = np.diff(r)
    w = np.zeros_like(r)
    w[:-1] += h / 2.0
    w[1:] += h / 2.0
    return w


class KContrast:
    """Discretized int (K-hat^q - K_theta^q)^2 dr over the grid points in [r_min, r_max]."""

    def __init__(self, k_hat: Curve, r_min: float = CONTRAST_R_MIN, r_max: float = CONTRAST_R_MAX, q: float = CONTRAST_Q):
        if k_hat.kind != "K":
            raise InvalidParameter("minimum contrast needs a K curve")
        sel = (k_hat.r >= r_min) & (k_hat.r <= r_max) & k_hat.defined
        if int(sel.sum()) < 2:
            raise InvalidParameter(f"fewer than two r-values in [{r_min}, {r_max}]")
        self.r = k_hat.r[sel]
        self.q = q
        self.target = np.power(np.maximum(k_hat.values[sel], 0.0), q)
        self.sqrt_w = np.sqrt(_trapezoid_weights(self.r))

    def residuals(self, k_theta: np.ndarray) -> np.ndarray:
        return self.sqrt_w * (self.target - np.power(np.maximum(k_theta, 0.0), self.q))

    def value(self, k_theta: np.ndarray) -> float:
        return float(np.sum(self.residuals(k_theta) ** 2))


def _near(value: float, bound: float, tol: float = 1e-6) -> bool:
    return abs(value - bound) <= tol * max(1.0, abs(bound))


def _fit_lgcp(contrast: KContrast, rho: float, bounds) -> FitResult:
    lo = np.log([b[0] for b in bounds])
    hi = np.log([b[1] for b in bounds])

    def k_of(z: np.ndarray) -> np.ndarray:
        return theoretical_K_lgcp(LgcpParams(rho, math.exp(z[0]), math.exp(z[1])), contrast.r)

    def objective(z: np.ndarray) -> float:
        return contrast.value(k_of(z))

    # coarse start on a log grid, then Nelder-Mead inside the box, then a least-squares polish
    grid = [np.array([a, b]) for a in np.linspace(lo[0], hi[0], 7) for b in np.linspace(lo[1], hi[1], 7)]
    start = min(grid, key=objective)
    nm = minimize(
        objective,
        start,
        method="Nelder-Mead",
        bounds=list(zip(lo, hi)),
        options={"xatol": 1e-10, "fatol": 1e-20, "maxiter": 4000},
    )
    z = np.clip(nm.x, lo, hi)
    iterations = int(nm.nit)
    converged = bool(nm.success)
    try:
        ls = least_squares(
            lambda zz: contrast.residuals(k_of(zz)), z, bounds=(lo, hi), xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
        if ls.cost * 2.0 <= objective(z):
            z = ls.x
        iterations += int(ls.nfev)
        converged = converged or bool(ls.success)
    except ValueError as exc:  # start exactly on a bound
        log.debug("least-squares polish skipped: %s", exc)
    if not converged:
        raise NoConvergence(f"LGCP minimum contrast did not converge: {nm.message}")
    sigma2, delta = float(np.exp(z[0])), float(np.exp(z[1]))
    hit = any(_near(z[i], lo[i]) or _near(z[i], hi[i]) for i in range(2))
    return FitResult(
        model="lgcp",
        params={"rho": rho, "sigma2": sigma2, "delta": delta},
        objective=objective(z),
        converged=converged,
        iterations=iterations,
        boundary=hit,
        message=str(nm.message),
    )


def _fit_dpp(contrast: KContrast, rho: float, kappa_bounds: Optional[Tuple[float, float]]) -> FitResult:
    kmax = DppGaussParams.kappa_max(rho)
    lo, hi = kappa_bounds or (KAPPA_MIN, kmax)
    hi = min(hi, kmax)

    def objective(kappa: float) -> float:
        return contrast.value(theoretical_K_dpp(DppGaussParams(rho, kappa), contrast.r))

    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12, "maxiter": 2000})
    if not res.success:
        raise NoConvergence(f"DPP minimum contrast did not converge: {res.message}")
    kappa = float(res.x)
    # the bounded search never evaluates the end points exactly
    for edge in (lo, hi):
        if objective(edge) < res.fun:
            kappa = edge
    return FitResult(
        model="dpp",
        params={"rho": rho, "kappa": kappa},
        objective=objective(kappa),
        converged=True,
        iterations=int(res.nfev),
        boundary=_near(kappa, lo) or _near(kappa, hi),
        message=str(res.message),
    )


def fit_minimum_contrast(
    x: PointPattern,
    model: str,
    rgrid: RGrid,
    q: float = CONTRAST_Q,
    bounds=None,
    r_min: float = CONTRAST_R_MIN,
    r_max: float = CONTRAST_R_MAX,
    k_hat: Optional[Curve] = None,
) -> FitResult:
    """
    Minimum contrast fit of the shape parameters with rho fixed at n(x) / |W|.

    lgcp: (sigma2, delta) by Nelder-Mead on log-parameters inside `bounds`;
    dpp: kappa by bounded scalar search on (1e-4, 1 / sqrt(rho pi)).
    `k_hat` may be passed to fit a precomputed curve.
    """
    rho = fit_intensity(x).rho
    curve = k_hat if k_hat is not None else estimate_K(x, rgrid)
    contrast = KContrast(curve, r_min, r_max, q)
    if model == "lgcp":
        fit = _fit_lgcp(contrast, rho, bounds or LGCP_BOUNDS)
    elif model == "dpp":
        fit = _fit_dpp(contrast, rho, bounds)
    else:
        raise InvalidParameter(f"minimum contrast supports lgcp and dpp, not {model!r}")
    log.debug("minimum contrast %s: %s (objective %.3g)", model, fit.params, fit.objective)
    return fit
