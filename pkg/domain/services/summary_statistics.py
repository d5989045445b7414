# domain/services/summary_statistics.py
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from domain.errors import EmptyPattern, InvalidParameter
from domain.models.curve import Curve
from domain.models.point_pattern import PointPattern
from domain.models.rgrid import RGrid
from domain.services.geometry import border_distances, nn_distances, pair_distances_within

DEFAULT_F_RESOLUTION = 128


def _border_ratio(
    dist: np.ndarray, border: np.ndarray, r: np.ndarray, reference: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """
    Numerator #{i: dist_i <= r <= border_i} and denominator #{i: border_i >= r} for every r.

    `dist` and `border` are aligned per item. When items are point pairs, `reference`
    holds the per-point borders the denominator counts.
    """
    keep = dist <= border
    d = np.sort(dist[keep])
    b = np.sort(border[keep])
    num = np.searchsorted(d, r, side="right") - np.searchsorted(b, r, side="left")
    ref = np.sort(border if reference is None else reference)
    den = ref.size - np.searchsorted(ref, r, side="left")
    return num.astype(float), den.astype(float)


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num, dtype=float)
    np.divide(num, den, out=out, where=den > 0)  # 0/0 := 0
    return out


def estimate_K(x: PointPattern, rgrid: RGrid) -> Curve:
    """Border-corrected K-hat with the global plug-in |W| / n."""
    if x.n == 0:
        raise EmptyPattern("K-hat needs at least one point")
    if rgrid.r_max >= x.window.min_side / 2.0:
        raise InvalidParameter(f"r_max={rgrid.r_max} must be below half the window's shorter side")
    r = rgrid.values
    b = border_distances(x)
    i, d = pair_distances_within(x, rgrid.r_max)
    num, den = _border_ratio(d, b[i], r, reference=b)
    return Curve(rgrid, x.window.area / x.n * _safe_div(num, den), "K")


def estimate_F(x: PointPattern, rgrid: RGrid, grid_resolution: int = DEFAULT_F_RESOLUTION) -> Curve:
    """Empty-space function on a cell-centred grid_resolution^2 lattice, border corrected."""
    if grid_resolution < 32:
        raise InvalidParameter(f"grid_resolution must be >= 32, got {grid_resolution}")
    r = rgrid.values
    lattice = x.window.lattice(grid_resolution)
    b = x.window.border_distance(lattice)
    if x.n == 0:
        return Curve(rgrid, np.zeros(r.size), "F")
    d, _ = cKDTree(x.points).query(lattice, k=1)
    num, den = _border_ratio(d, b, r)
    return Curve(rgrid, _safe_div(num, den), "F")


def estimate_G(x: PointPattern, rgrid: RGrid) -> Curve:
    """Nearest-neighbour distance distribution, border corrected."""
    if x.n == 0:
        raise EmptyPattern("G-hat needs at least one point")
    r = rgrid.values
    b = border_distances(x)
    d = nn_distances(x) if x.n >= 2 else np.full(x.n, np.inf)
    num, den = _border_ratio(d, b, r)
    return Curve(rgrid, _safe_div(num, den), "G")


def estimate_J(x: PointPattern, rgrid: RGrid, grid_resolution: int = DEFAULT_F_RESOLUTION) -> Curve:
    """(1 - G-hat) / (1 - F-hat); undefined where F-hat = 1."""
    g = estimate_G(x, rgrid)
    f = estimate_F(x, rgrid, grid_resolution)
    defined = f.values < 1.0
    values = np.full(len(rgrid), np.nan)
    values[defined] = (1.0 - g.values[defined]) / (1.0 - f.values[defined])
    return Curve(rgrid, values, "J", defined)


def estimate(kind: str, x: PointPattern, rgrid: RGrid, grid_resolution: int = DEFAULT_F_RESOLUTION) -> Curve:
    if kind == "K":
        return estimate_K(x, rgrid)
    if kind == "F":
        return estimate_F(x, rgrid, grid_resolution)
    if kind == "G":
        return estimate_G(x, rgrid)
    if kind == "J":
        return estimate_J(x, rgrid, grid_resolution)
    raise InvalidParameter(f"unknown statistic {kind!r}")


def poisson_reference(kind: str, rho: float, rgrid: RGrid) -> Curve:
    """Theoretical curve under complete spatial randomness with intensity rho."""
    r = rgrid.values
    if kind == "K":
        values = np.pi * r**2
    elif kind in ("F", "G"):
        values = -np.expm1(-rho * np.pi * r**2)
    elif kind == "J":
        values = np.ones_like(r)
    else:
        raise InvalidParameter(f"unknown statistic {kind!r}")
    return Curve(rgrid, values, kind)
