# domain/models/window.py
from __future__ import annotations
from dataclasses import dataclass

import numpy as np
from typing_extensions import Self

from domain.errors import DegenerateWindow


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle [xmin, xmax] x [ymin, ymax]; boundary is closed."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self) -> None:
        for name in ("xmin", "xmax", "ymin", "ymax"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise DegenerateWindow(
                f"window needs positive extent, got [{self.xmin}, {self.xmax}] x [{self.ymin}, {self.ymax}]"
            )

    @classmethod
    def unit_square(cls) -> Self:
        return cls(0.0, 1.0, 0.0, 1.0)

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def min_side(self) -> float:
        return min(self.width, self.height)

    def erode(self, r: float) -> "Window":
        """W eroded by a closed ball of radius r; raises DegenerateWindow if 2r >= min side."""
        if r < 0:
            raise ValueError(f"erosion radius must be >= 0, got {r}")
        if r == 0:
            return self
        if 2.0 * r >= self.min_side:
            raise DegenerateWindow(f"eroding by r={r} exhausts a window with min side {self.min_side}")
        return Window(self.xmin + r, self.xmax - r, self.ymin + r, self.ymax - r)

    def dilate(self, r: float) -> "Window":
        # rectangle hull of W dilated by a ball; a superset of W (+) r
        if r < 0:
            raise ValueError(f"dilation radius must be >= 0, got {r}")
        if r == 0:
            return self
        return Window(self.xmin - r, self.xmax + r, self.ymin - r, self.ymax + r)

    def shift(self, dx: float, dy: float) -> "Window":
        return Window(self.xmin + dx, self.xmax + dx, self.ymin + dy, self.ymax + dy)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        """Boolean mask of rows of an (n, 2) array lying in the closed rectangle."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return (
            (pts[:, 0] >= self.xmin)
            & (pts[:, 0] <= self.xmax)
            & (pts[:, 1] >= self.ymin)
            & (pts[:, 1] <= self.ymax)
        )

    def border_distance(self, pts: np.ndarray) -> np.ndarray:
        """Distance from each point to the boundary; u lies in W eroded by r iff this is >= r."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return np.minimum.reduce(
            [
                pts[:, 0] - self.xmin,
                self.xmax - pts[:, 0],
                pts[:, 1] - self.ymin,
                self.ymax - pts[:, 1],
            ]
        )

    def lattice(self, nx: int, ny: int | None = None) -> np.ndarray:
        """Cell-centred nx x ny lattice, rows ordered x-fastest."""
        ny = nx if ny is None else ny
        xs = self.xmin + (np.arange(nx) + 0.5) * (self.width / nx)
        ys = self.ymin + (np.arange(ny) + 0.5) * (self.height / ny)
        gx, gy = np.meshgrid(xs, ys)
        return np.column_stack([gx.ravel(), gy.ravel()])

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.xmin, self.xmax, self.ymin, self.ymax)
