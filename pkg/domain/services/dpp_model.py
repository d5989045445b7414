# domain/services/dpp_model.py
from __future__ import annotations
import logging
import math
from typing import Optional

import numpy as np

from domain.errors import ExistenceViolated, InvalidParameter, TruncationTooLarge
from domain.models.count_pmf import CountPmf
from domain.models.dpp_spectrum import DppSpectrum
from domain.models.model_params import DppGaussParams
from domain.models.window import Window

log = logging.getLogger("models.dpp")

DEFAULT_MAX_FREQUENCY = 128
EPS_RELATIVE = 1e-6
_LOG_TINY = 745.0  # exp(-745) underflows to 0 in double precision
_PMF_TRIM = 1e-20


def _axis_terms(kappa: float, length: float, bound: int) -> np.ndarray:
    k = np.arange(-bound, bound + 1, dtype=float)
    return np.exp(-(math.pi * kappa * k / length) ** 2)


def _axis_total(kappa: float, length: float) -> float:
    bound = int(math.ceil(math.sqrt(_LOG_TINY) * length / (math.pi * kappa))) + 1
    return float(_axis_terms(kappa, length, bound).sum())


def dpp_spectrum(
    p: DppGaussParams,
    w: Window,
    eps: Optional[float] = None,
    max_frequency: int = DEFAULT_MAX_FREQUENCY,
) -> DppSpectrum:
    """
    Truncated Fourier spectrum of the Gaussian kernel rho * exp(-||h / kappa||^2) on w.

    Eigenvalue at frequency k is the kernel's Fourier transform at
    (k1 / width, k2 / height): rho pi kappa^2 exp(-pi^2 kappa^2 ||.||^2).
    The bound M is the smallest with neglected mass below eps
    (default 1e-6 * rho |W|).
    """
    lam0 = p.rho * math.pi * p.kappa**2
    if lam0 > 1.0 + 1e-12:
        raise ExistenceViolated(f"rho*pi*kappa^2 = {lam0:.6g} > 1")
    lam0 = min(lam0, 1.0)
    eps = EPS_RELATIVE * p.rho * w.area if eps is None else float(eps)
    if eps <= 0:
        raise InvalidParameter("eps must be > 0")

    total_x = _axis_total(p.kappa, w.width)
    total_y = _axis_total(p.kappa, w.height)
    total = lam0 * total_x * total_y

    bound = 0
    while True:
        sx = _axis_terms(p.kappa, w.width, bound).sum()
        sy = _axis_terms(p.kappa, w.height, bound).sum()
        neglected = max(total - lam0 * sx * sy, 0.0)
        if neglected < eps:
            break
        bound += 1
        if bound > max_frequency:
            raise TruncationTooLarge(
                f"kappa={p.kappa} needs |k| > {max_frequency} to reach neglected mass {eps:g}"
            )

    ax = _axis_terms(p.kappa, w.width, bound)
    ay = _axis_terms(p.kappa, w.height, bound)
    lam = lam0 * np.outer(ay, ax).ravel()  # rows: k2, cols: k1
    k = np.arange(-bound, bound + 1)
    k1, k2 = np.meshgrid(k, k)
    freq = np.column_stack([k1.ravel(), k2.ravel()])
    order = np.argsort(-lam, kind="stable")
    log.debug("dpp_spectrum: M=%d, %d eigenvalues, neglected=%.3g", bound, lam.size, neglected)
    return DppSpectrum(np.clip(lam[order], 0.0, 1.0), freq[order], w, bound, neglected)


def dpp_count_distribution(s: DppSpectrum) -> CountPmf:
    """Exact pmf of sum_i Bernoulli(lambda_i), by iterated convolution."""
    p = np.ones(1)
    for lam in s.eigenvalues:
        if lam == 0.0:
            continue
        nxt = np.empty(p.size + 1)
        nxt[:-1] = p * (1.0 - lam)
        nxt[-1] = 0.0
        nxt[1:] += p * lam
        p = nxt
        # drop an upper tail of negligible mass so long spectra stay cheap
        tail = np.cumsum(p[::-1])[::-1]
        keep = np.flatnonzero(tail >= _PMF_TRIM)
        if keep.size and keep[-1] + 1 < p.size:
            p = p[: keep[-1] + 1]
    return CountPmf(p / p.sum())


def dpp_pair_correlation(p: DppGaussParams, r):
    r_arr = np.asarray(r, dtype=float)
    g = 1.0 - np.exp(-2.0 * r_arr**2 / p.kappa**2)
    return float(g) if g.ndim == 0 else g


def theoretical_K_dpp(p: DppGaussParams, r):
    """K(r) = pi r^2 - (pi kappa^2 / 2)(1 - exp(-2 r^2 / kappa^2))."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise InvalidParameter("r must be >= 0")
    k = np.pi * r_arr**2 - 0.5 * np.pi * p.kappa**2 * (-np.expm1(-2.0 * r_arr**2 / p.kappa**2))
    return float(k) if k.ndim == 0 else k
