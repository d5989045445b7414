# domain/models/grid_field.py
from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from domain.errors import InvalidParameter
from domain.models.window import Window


@dataclass(frozen=True, eq=False)
class GridField:
    """Piecewise-constant random intensity Z = exp(Y) on an nx x ny cell grid (rows = y, cols = x)."""

    log_values: np.ndarray  # Y per cell, shape (ny, nx)
    window: Window

    def __post_init__(self) -> None:
        y = np.array(self.log_values, dtype=float)
        if y.ndim != 2 or min(y.shape) < 2:
            raise InvalidParameter(f"field grid must be at least 2 x 2, got shape {y.shape}")
        if not np.all(np.isfinite(y)):
            raise InvalidParameter("field values must be finite")
        y.setflags(write=False)
        object.__setattr__(self, "log_values", y)

    @property
    def ny(self) -> int:
        return int(self.log_values.shape[0])

    @property
    def nx(self) -> int:
        return int(self.log_values.shape[1])

    @property
    def values(self) -> np.ndarray:
        return np.exp(self.log_values)

    @property
    def cell_area(self) -> float:
        return self.window.area / (self.nx * self.ny)

    def integral(self) -> float:
        """Cell-sum approximation of the integral of Z over the window."""
        return float(self.values.sum() * self.cell_area)

    def cell_corners(self, cells: np.ndarray) -> np.ndarray:
        """Lower-left corners of flattened (x-fastest) cell indices."""
        cells = np.asarray(cells, dtype=np.int64)
        w = self.window
        cx = cells % self.nx
        cy = cells // self.nx
        return np.column_stack([w.xmin + cx * (w.width / self.nx), w.ymin + cy * (w.height / self.ny)])
