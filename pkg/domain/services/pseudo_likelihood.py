# domain/services/pseudo_likelihood.py
from __future__ import annotations
from dataclasses import dataclass
import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree
from scipy.special import logsumexp, softmax

from domain.errors import InvalidParameter, NoInteriorPoints
from domain.models.fit_result import FitResult
from domain.models.point_pattern import PointPattern
from domain.services.geometry import neighbour_counts

log = logging.getLogger("estimation.mple")

DEFAULT_QUAD_RESOLUTION = 256
PROFILE_R_GRID = tuple(float(r) for r in np.linspace(0.03, 0.07, 41))
PSI_FLOOR = -64.0
NEAR_TIE = 0.5


@dataclass(frozen=True, eq=False)
class StraussPseudoLikelihood:
    """
    Log pseudo-likelihood in psi = log(gamma) with the integrals reduced to histograms.

    Each row of `weights` counts quadrature points by their neighbour count k, so a row's
    integral is cell_area * sum_k weights[k] exp(psi k). The unconditional (profile) form
    uses one row with multiplicity m and the constant m log m - m; the conditional form
    has one row per interior data point.
    """

    weights: np.ndarray     # (rows, K + 1)
    multiplicity: int
    observed: float         # S = sum over interior data points of t(x minus x_i, x_i)
    m: int
    cell_area: float
    constant: float = 0.0

    def _log_integrals(self, psi: float) -> np.ndarray:
        k = np.arange(self.weights.shape[1], dtype=float)
        with np.errstate(divide="ignore"):
            return math.log(self.cell_area) + logsumexp(psi * k, b=self.weights, axis=1)

    def value(self, psi: float) -> float:
        return float(psi * self.observed - self.multiplicity * np.sum(self._log_integrals(psi)) + self.constant)

    def score(self, psi: float) -> float:
        k = np.arange(self.weights.shape[1], dtype=float)
        with np.errstate(divide="ignore"):
            logw = np.log(self.weights) + psi * k
        expected = np.sum(softmax(logw, axis=1) * k, axis=1)
        return float(self.observed - self.multiplicity * expected.sum())

    def information(self, psi: float) -> float:
        """Minus the second derivative: multiplicity * sum of per-row variances of k."""
        k = np.arange(self.weights.shape[1], dtype=float)
        with np.errstate(divide="ignore"):
            logw = np.log(self.weights) + psi * k
        p = softmax(logw, axis=1)
        mean = np.sum(p * k, axis=1)
        var = np.sum(p * k**2, axis=1) - mean**2
        return float(self.multiplicity * var.sum())

    def value_at_zero_gamma(self) -> float:
        """Limit psi -> -inf; -inf unless every observed count is zero."""
        if self.observed > 0:
            return -math.inf
        c0 = self.weights[:, 0]
        if np.any(c0 <= 0):
            return -math.inf
        return float(-self.multiplicity * np.sum(np.log(self.cell_area * c0)) + self.constant)

    def flat(self) -> bool:
        return bool(np.all(self.weights[:, 1:] == 0))


@dataclass(frozen=True, eq=False)
class _Quadrature:
    t_lattice: np.ndarray   # t(x, u) per quadrature point
    lattice: np.ndarray
    t_data: np.ndarray      # t(x minus x_i, x_i) per interior data point
    interior: np.ndarray    # interior data points
    cell_area: float
    domain_area: float


def _quadrature(x: PointPattern, R: float, quad_resolution: int, border: Optional[float]) -> _Quadrature:
    if R <= 0:
        raise InvalidParameter(f"R must be > 0, got {R}")
    if quad_resolution < 2:
        raise InvalidParameter("quad_resolution must be >= 2")
    domain = x.window.erode(R if border is None else max(border, R))
    inside = domain.contains(x.points)
    interior = x.points[inside]
    if interior.shape[0] == 0:
        raise NoInteriorPoints(f"no data points in the eroded window {domain.as_tuple()}")
    lattice = domain.lattice(quad_resolution)
    t_lattice = neighbour_counts(x.points, lattice, R)
    t_all = neighbour_counts(x.points, x.points, R, exclude_self=True)
    return _Quadrature(
        t_lattice=t_lattice,
        lattice=lattice,
        t_data=t_all[inside],
        interior=interior,
        cell_area=domain.area / lattice.shape[0],
        domain_area=domain.area,
    )


def unconditional_pseudo_likelihood(
    x: PointPattern, R: float, quad_resolution: int = DEFAULT_QUAD_RESOLUTION, border: Optional[float] = None
) -> StraussPseudoLikelihood:
    q = _quadrature(x, R, quad_resolution, border)
    m = q.interior.shape[0]
    counts = np.bincount(q.t_lattice).astype(float)[None, :]
    return StraussPseudoLikelihood(
        weights=counts,
        multiplicity=m,
        observed=float(q.t_data.sum()),
        m=m,
        cell_area=q.cell_area,
        constant=m * math.log(m) - m,
    )


def conditional_pseudo_likelihood(
    x: PointPattern, R: float, quad_resolution: int = DEFAULT_QUAD_RESOLUTION, border: Optional[float] = None
) -> StraussPseudoLikelihood:
    q = _quadrature(x, R, quad_resolution, border)
    m = q.interior.shape[0]
    if m < 2:
        raise NoInteriorPoints(f"conditional pseudo-likelihood needs >= 2 interior points, got {m}")
    width = int(q.t_lattice.max()) + 2
    base = np.bincount(q.t_lattice, minlength=width).astype(float)
    near = cKDTree(q.lattice).query_ball_point(q.interior, R)
    rows = np.empty((m, width))
    for i, idx in enumerate(near):
        h = np.bincount(q.t_lattice[np.asarray(idx, dtype=np.int64)], minlength=width).astype(float)
        # quadrature points within R of x_i lose x_i as a neighbour: count k + 1 becomes k
        rows[i] = base - h
        rows[i, :-1] += h[1:]
    return StraussPseudoLikelihood(
        weights=rows, multiplicity=1, observed=float(q.t_data.sum()), m=m, cell_area=q.cell_area
    )


def _maximize(pl: StraussPseudoLikelihood) -> tuple[float, bool, str, int]:
    """psi-hat on [-inf, 0]; returns (psi, boundary, message, root-search iterations)."""
    if pl.flat():
        return 0.0, True, "no quadrature point has a neighbour; profile is flat in gamma", 0
    if pl.observed == 0:
        return -math.inf, True, "no observed R-close neighbours; pseudo-likelihood increases as gamma -> 0", 0
    if pl.score(0.0) >= 0.0:
        return 0.0, True, "score nonnegative at gamma = 1", 0
    lo = -1.0
    while pl.score(lo) <= 0.0:
        lo *= 2.0
        if lo < PSI_FLOOR:
            return -math.inf, True, "score stays negative down to gamma ~ 0", 0
    psi, info = brentq(pl.score, lo, 0.0, xtol=1e-14, rtol=1e-14, maxiter=500, full_output=True)
    return float(psi), False, "interior maximum", int(info.iterations)


def _gamma(psi: float) -> float:
    return 0.0 if psi == -math.inf else math.exp(psi)


def _value(pl: StraussPseudoLikelihood, psi: float) -> float:
    return pl.value_at_zero_gamma() if psi == -math.inf else pl.value(psi)


def mple_strauss(
    x: PointPattern, R: float, quad_resolution: int = DEFAULT_QUAD_RESOLUTION, border: Optional[float] = None
) -> FitResult:
    """
    Maximum pseudo-likelihood (beta-hat, gamma-hat) on W eroded by R, given R.

    beta-hat(psi) = m / int gamma^t(x, u) du is profiled out; the concave profile is
    maximized by a root search on its score. gamma-hat in {0, 1} is flagged as boundary.
    """
    pl = unconditional_pseudo_likelihood(x, R, quad_resolution, border)
    psi, boundary, message, iterations = _maximize(pl)
    if psi == -math.inf:
        c0 = float(pl.weights[0, 0])
        beta = pl.m / (pl.cell_area * c0) if c0 > 0 else math.nan
        score = None
    else:
        beta = pl.m / math.exp(pl._log_integrals(psi)[0])
        score = pl.score(psi)
    log.debug("mple R=%.4g: m=%d S=%g gamma=%.6g beta=%.6g (%s)", R, pl.m, pl.observed, _gamma(psi), beta, message)
    return FitResult(
        model="strauss",
        params={"beta": float(beta), "gamma": _gamma(psi), "R": float(R)},
        objective=_value(pl, psi),
        converged=True,
        iterations=iterations,
        gradient=score,
        boundary=boundary,
        message=message,
        extra={"m": pl.m, "observed_neighbours": pl.observed},
    )


def mple_strauss_conditional(
    x: PointPattern, R: float, quad_resolution: int = DEFAULT_QUAD_RESOLUTION, border: Optional[float] = None
) -> FitResult:
    """Besag-type pseudo-likelihood for gamma given the number of interior points; beta does not enter."""
    pl = conditional_pseudo_likelihood(x, R, quad_resolution, border)
    psi, boundary, message, iterations = _maximize(pl)
    score = None if psi == -math.inf else pl.score(psi)
    log.debug("conditional mple R=%.4g: m=%d gamma=%.6g (%s)", R, pl.m, _gamma(psi), message)
    return FitResult(
        model="strauss-cond",
        params={"gamma": _gamma(psi), "R": float(R)},
        objective=_value(pl, psi),
        converged=True,
        iterations=iterations,
        gradient=score,
        boundary=boundary,
        message=message,
        extra={"m": pl.m, "observed_neighbours": pl.observed},
    )


def profile_mple_R(
    x: PointPattern,
    R_grid: Sequence[float] = PROFILE_R_GRID,
    quad_resolution: int = DEFAULT_QUAD_RESOLUTION,
    tie_tolerance: float = NEAR_TIE,
) -> FitResult:
    """
    mple_strauss at every R, all on W eroded by max(R_grid) so the values are comparable;
    the largest profile value wins and ties go to the smallest R.
    """
    grid = sorted(float(r) for r in R_grid)
    if not grid:
        raise InvalidParameter("R_grid must not be empty")
    border = grid[-1]
    fits = [mple_strauss(x, R, quad_resolution, border=border) for R in grid]
    values = np.array([f.objective for f in fits])
    best = int(np.argmax(values))  # first maximum = smallest R
    others = np.delete(values, best)
    near_tie = bool(others.size and np.any(values[best] - others <= tie_tolerance))
    fit = fits[best]
    fit.extra = {
        **fit.extra,
        "near_tie": near_tie,
        "profile": [{"R": r, "objective": float(v)} for r, v in zip(grid, values)],
    }
    return fit
