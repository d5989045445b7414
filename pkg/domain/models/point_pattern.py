# domain/models/point_pattern.py
from __future__ import annotations
from dataclasses import dataclass, field

import numpy as np

from domain.errors import InvalidParameter
from domain.models.window import Window


@dataclass(frozen=True, eq=False)
class PointPattern:
    """
    Finite planar point pattern x = {x_1, ..., x_n} observed in `window`.

    `points` is stored as a read-only (n, 2) float array in the order given.
    """

    points: np.ndarray
    window: Window
    meta: dict = field(default_factory=dict)  # sampler bookkeeping (attempts, chain trace, ...)

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise InvalidParameter("point coordinates must be finite")
        if pts.shape[0] and not np.all(self.window.contains(pts)):
            raise InvalidParameter("every point must lie inside the window")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def empty(cls, window: Window) -> "PointPattern":
        return cls(np.empty((0, 2)), window)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    def __len__(self) -> int:
        return self.n

    @property
    def intensity(self) -> float:
        return self.n / self.window.area

    def shift(self, dx: float, dy: float) -> "PointPattern":
        return PointPattern(self.points + np.array([dx, dy]), self.window.shift(dx, dy))

    def same_points(self, other: "PointPattern") -> bool:
        return (
            self.window == other.window
            and self.points.shape == other.points.shape
            and bool(np.array_equal(self.points, other.points))
        )


def restrict(x: PointPattern, b: Window) -> PointPattern:
    """x_b = x ∩ b observed in b; original order preserved."""
    if b == x.window:
        return x
    return PointPattern(x.points[b.contains(x.points)], b)
