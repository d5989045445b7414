# domain/services/lgcp_sampler.py
from __future__ import annotations
from functools import lru_cache
import logging
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, cholesky
from scipy.spatial.distance import cdist
from scipy.stats import poisson

from domain.errors import AttemptsExhausted, CovarianceNotPD, InvalidParameter
from domain.models.grid_field import GridField
from domain.models.model_params import LgcpParams
from domain.models.point_pattern import PointPattern
from domain.models.seed_spec import SeedSpec
from domain.models.window import Window

log = logging.getLogger("samplers.lgcp")

DEFAULT_GRID = 64
DEFAULT_MAX_ATTEMPTS = 100_000
JITTERS = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6)


@lru_cache(maxsize=2)
def _correlation_factor(delta: float, window: tuple, nx: int, ny: int) -> np.ndarray:
    """Lower Cholesky factor of exp(-d / delta) between cell centres."""
    centres = Window(*window).lattice(nx, ny)
    corr = np.exp(-cdist(centres, centres) / delta)
    for jitter in JITTERS:
        try:
            a = corr + jitter * np.eye(corr.shape[0]) if jitter else corr
            factor = cholesky(a, lower=True, check_finite=False)
        except LinAlgError:
            log.debug("cholesky failed at jitter=%g (delta=%g, grid=%dx%d)", jitter, delta, nx, ny)
            continue
        if jitter:
            log.info("field covariance factorized with jitter %g", jitter)
        factor.setflags(write=False)
        return factor
    raise CovarianceNotPD(f"exponential covariance with delta={delta} on a {nx}x{ny} grid is not positive definite")


def _check_grid(nx: int, ny: int) -> None:
    if nx < 2 or ny < 2:
        raise InvalidParameter(f"field grid needs at least 2 cells per side, got {nx}x{ny}")


def _draw_field(p: LgcpParams, w: Window, nx: int, ny: int, rng: np.random.Generator) -> GridField:
    factor = _correlation_factor(p.delta, w.as_tuple(), nx, ny)
    z = rng.standard_normal(nx * ny)
    y = p.mu + np.sqrt(p.sigma2) * (factor @ z)
    return GridField(y.reshape(ny, nx), w)


def _place_in_cells(field: GridField, cells: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    corners = field.cell_corners(cells)
    w = field.window
    size = np.array([w.width / field.nx, w.height / field.ny])
    pts = corners + rng.random((cells.size, 2)) * size
    # keep floating-point placements inside the closed window
    return np.clip(pts, [w.xmin, w.ymin], [w.xmax, w.ymax])


def sample_gauss_field(
    p: LgcpParams, w: Window, seed: SeedSpec, nx: int = DEFAULT_GRID, ny: Optional[int] = None
) -> GridField:
    """Gaussian field Y at cell centres, mean mu and covariance sigma2 exp(-d / delta)."""
    ny = nx if ny is None else ny
    _check_grid(nx, ny)
    return _draw_field(p, w, nx, ny, seed.rng())


def sample_lgcp(
    p: LgcpParams, w: Window, seed: SeedSpec, nx: int = DEFAULT_GRID, ny: Optional[int] = None
) -> PointPattern:
    ny = nx if ny is None else ny
    _check_grid(nx, ny)
    rng = seed.rng()
    field = _draw_field(p, w, nx, ny, rng)
    counts = rng.poisson(field.values.ravel() * field.cell_area)
    cells = np.repeat(np.arange(counts.size), counts)
    return PointPattern(_place_in_cells(field, cells, rng), w, meta={"field_integral": field.integral()})


def sample_lgcp_conditional(
    n: int,
    p: LgcpParams,
    w: Window,
    seed: SeedSpec,
    nx: int = DEFAULT_GRID,
    ny: Optional[int] = None,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> PointPattern:
    """
    LGCP conditioned on N(W) = n by acceptance-rejection on the field.

    A field z is kept when U <= Poisson(n; int z); the n points are then placed
    independently with density proportional to z.
    """
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    if max_attempts < 1:
        raise InvalidParameter("max_attempts must be >= 1")
    ny = nx if ny is None else ny
    _check_grid(nx, ny)
    rng = seed.rng()
    for attempt in range(1, max_attempts + 1):
        field = _draw_field(p, w, nx, ny, rng)
        mass = field.integral()
        if rng.random() <= poisson.pmf(n, mass):
            weights = field.values.ravel()
            cells = rng.choice(weights.size, size=n, p=weights / weights.sum())
            log.debug("conditional LGCP accepted after %d attempts", attempt)
            return PointPattern(_place_in_cells(field, cells, rng), w, meta={"attempts": attempt, "field_integral": mass})
    raise AttemptsExhausted(f"no field accepted for n={n} within {max_attempts} attempts ({p})")
