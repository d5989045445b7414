# domain/models/rgrid.py
from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from domain.errors import InvalidParameter

DEFAULT_R_MAX = 0.25
DEFAULT_R_COUNT = 513


@dataclass(frozen=True, eq=False)
class RGrid:
    """Strictly increasing distances r >= 0 shared by every summary curve."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float).ravel()
        if v.size == 0:
            raise InvalidParameter("r-grid must not be empty")
        if v[0] < 0:
            raise InvalidParameter("r-grid values must be >= 0")
        if v.size > 1 and not np.all(np.diff(v) > 0):
            raise InvalidParameter("r-grid must be strictly increasing")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def linear(cls, r_max: float = DEFAULT_R_MAX, count: int = DEFAULT_R_COUNT) -> "RGrid":
        return cls(np.linspace(0.0, r_max, count))

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def r_max(self) -> float:
        return float(self.values[-1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RGrid):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash(self.values.tobytes())
