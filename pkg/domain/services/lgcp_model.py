# domain/services/lgcp_model.py
from __future__ import annotations

import numpy as np
from scipy.integrate import quad_vec

from domain.errors import InvalidParameter
from domain.models.model_params import LgcpParams


def lgcp_covariance(p: LgcpParams, d):
    """Exponential covariance sigma2 * exp(-d / delta) of the Gaussian field."""
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr < 0):
        raise InvalidParameter("distances must be >= 0")
    c = p.sigma2 * np.exp(-d_arr / p.delta)
    return float(c) if c.ndim == 0 else c


def lgcp_pair_correlation(p: LgcpParams, r):
    g = np.exp(lgcp_covariance(p, r))
    return float(g) if np.ndim(g) == 0 else g


def theoretical_K_lgcp(p: LgcpParams, r):
    """
    K(r) = 2 pi int_0^r t exp(sigma2 exp(-t / delta)) dt.

    Evaluated for all r at once with t = r s, so the integral runs over s in [0, 1].
    """
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr < 0):
        raise InvalidParameter("r must be >= 0")

    def integrand(s: float) -> np.ndarray:
        return s * np.exp(p.sigma2 * np.exp(-r_arr * s / p.delta))

    integral, _ = quad_vec(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11)
    k = 2.0 * np.pi * r_arr**2 * integral
    return float(k[0]) if np.ndim(r) == 0 else k
