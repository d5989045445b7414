# domain/services/geometry.py
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from domain.errors import InvalidParameter
from domain.models.point_pattern import PointPattern


def _as_points(u) -> np.ndarray:
    return np.asarray(u, dtype=float).reshape(-1, 2)


def close_pair_count(x: PointPattern, R: float) -> int:
    """s(x): number of unordered pairs at distance <= R."""
    if R <= 0:
        raise InvalidParameter(f"R must be > 0, got {R}")
    if x.n < 2:
        return 0
    return int(np.count_nonzero(pdist(x.points) <= R))


def nn_distances(x: PointPattern) -> np.ndarray:
    """Distance from each point to its nearest other point; empty when n(x) <= 1."""
    if x.n < 2:
        return np.empty(0)
    d, _ = cKDTree(x.points).query(x.points, k=2)
    return d[:, 1]


def border_distances(x: PointPattern) -> np.ndarray:
    return x.window.border_distance(x.points)


def neighbour_counts(points: np.ndarray, u, R: float, exclude_self: bool = False) -> np.ndarray:
    """
    t(points, u) for every location in `u`: number of `points` within closed distance R.

    With exclude_self the locations are taken to be the points themselves and each
    point is not counted as its own neighbour.
    """
    pts = _as_points(points)
    locs = _as_points(u)
    if pts.shape[0] == 0 or locs.shape[0] == 0:
        return np.zeros(locs.shape[0], dtype=np.int64)
    counts = cKDTree(pts).query_ball_point(locs, R, return_length=True)
    counts = np.asarray(counts, dtype=np.int64)
    return counts - 1 if exclude_self else counts


def pair_distances_within(x: PointPattern, r_max: float) -> tuple[np.ndarray, np.ndarray]:
    """Ordered pairs (i, d_ij), i != j, with d_ij <= r_max."""
    if x.n < 2:
        return np.empty(0, dtype=np.int64), np.empty(0)
    tree = cKDTree(x.points)
    pairs = tree.query_pairs(r_max, output_type="ndarray")
    if pairs.size == 0:
        return np.empty(0, dtype=np.int64), np.empty(0)
    d = np.linalg.norm(x.points[pairs[:, 0]] - x.points[pairs[:, 1]], axis=1)
    i = np.concatenate([pairs[:, 0], pairs[:, 1]])
    return i, np.concatenate([d, d])
