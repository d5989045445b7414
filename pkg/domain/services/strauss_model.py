# domain/services/strauss_model.py
from __future__ import annotations
import logging
import math
from typing import Optional

import numpy as np
from scipy.special import gammaln, logsumexp

from domain.errors import TailTooHeavy
from domain.models.count_pmf import CountPmf, PMF_TOLERANCE
from domain.models.model_params import StraussParams
from domain.models.point_pattern import PointPattern
from domain.services.geometry import neighbour_counts

log = logging.getLogger("models.strauss")

_MAX_AUTO_N = 1 << 16


def papangelou_strauss(x: PointPattern, u, p: StraussParams) -> float | np.ndarray:
    """
    Conditional intensity beta * gamma^t(x, u) for adding u to x.

    `u` may be a single location or an (m, 2) array of locations.
    """
    u_arr = np.asarray(u, dtype=float)
    t = neighbour_counts(x.points, u_arr, p.R)
    lam = p.beta * np.power(p.gamma, t.astype(float))  # 0.0 ** 0 == 1
    return float(lam[0]) if u_arr.ndim == 1 else lam


def _log_weights(p: StraussParams, n_max: int, area: float) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    log_b = math.log(p.beta * area)
    pair_term = (p.gamma - 1.0) * n * (n - 1.0) * math.pi * p.R**2 / (2.0 * area)
    return n * log_b - gammaln(n + 1.0) + pair_term


def _tail_ok(p: StraussParams, log_w: np.ndarray, area: float) -> bool:
    n_max = log_w.size - 1
    # ratio p(n+1)/p(n) is decreasing in n; bound the tail by a geometric series
    q = p.beta * area / (n_max + 1.0) * math.exp((p.gamma - 1.0) * n_max * math.pi * p.R**2 / area)
    if q >= 1.0:
        return False
    log_tail = log_w[-1] + math.log(q) - math.log1p(-q)
    return log_tail - logsumexp(log_w) < math.log(PMF_TOLERANCE)


def ripley_count_pmf(p: StraussParams, n_max: Optional[int] = None, area: float = 1.0) -> CountPmf:
    """
    Approximate distribution of N(W) for a Strauss process on a window of area `area`:

        p(n) ∝ (beta |W|)^n / n! * exp{(gamma - 1) n (n - 1) pi R^2 / (2 |W|)}

    With |W| = 1 this is the unit-square form. Raises TailTooHeavy when the mass
    beyond n_max cannot be bounded below 1e-12.
    """
    if n_max is None:
        n_max = int(max(4 * math.ceil(p.beta * area), 200))
    log_w = _log_weights(p, n_max, area)
    if not _tail_ok(p, log_w, area):
        raise TailTooHeavy(f"tail mass beyond n_max={n_max} is not negligible for {p}")
    probs = np.exp(log_w - logsumexp(log_w))
    return CountPmf(probs / probs.sum())


def ripley_count_mean(p: StraussParams, area: float = 1.0) -> float:
    """Mean of ripley_count_pmf; n_max doubles from max(4 beta, 200) until the tail check holds."""
    n_max = int(max(4 * math.ceil(p.beta * area), 200))
    while True:
        try:
            return ripley_count_pmf(p, n_max, area).mean()
        except TailTooHeavy:
            if n_max >= _MAX_AUTO_N:
                raise
            n_max *= 2
            log.debug("ripley_count_mean: widening support to n_max=%d", n_max)
