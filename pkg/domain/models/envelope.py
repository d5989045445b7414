# domain/models/envelope.py
from __future__ import annotations
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from domain.errors import MismatchedGrids, TooFewCurves
from domain.models.curve import Curve
from domain.models.rgrid import RGrid


@dataclass(frozen=True, eq=False)
class CurveSet:
    """Observed curve (row 0) followed by s simulated curves on one r-grid."""

    rgrid: RGrid
    values: np.ndarray  # shape (s + 1, m)
    mask: np.ndarray  # common defined-mask (intersection), shape (m,)
    kind: str

    @classmethod
    def from_curves(cls, data: Curve, sims: Sequence[Curve]) -> "CurveSet":
        if len(sims) < 1:
            raise TooFewCurves("at least one simulated curve is required")
        for c in sims:
            if c.rgrid != data.rgrid:
                raise MismatchedGrids("every curve must share the data curve's r-grid")
            if c.kind != data.kind:
                raise MismatchedGrids(f"cannot mix {data.kind} and {c.kind} curves")
        curves = [data, *sims]
        mask = np.logical_and.reduce([c.defined for c in curves])
        values = np.vstack([np.where(c.defined, c.values, np.nan) for c in curves])
        return cls(data.rgrid, values, mask, data.kind)

    @property
    def s(self) -> int:
        return int(self.values.shape[0] - 1)

    @property
    def data(self) -> np.ndarray:
        return self.values[0]


@dataclass(frozen=True, eq=False)
class Envelope:
    """
    Global ERL envelope: pointwise bounds of the retained curves on the common mask.

    `data_inside` is the ERL-consistent containment of the data curve, which is
    equivalent to p_value > alpha.
    """

    lower: Curve
    upper: Curve
    observed: Curve
    alpha: float
    p_value: float
    erl_classes: np.ndarray  # tie-class index per curve, 0 = most extreme
    retained: np.ndarray  # boolean per curve
    n_sims: int

    @property
    def data_inside(self) -> bool:
        return bool(self.retained[0])

    @property
    def rejected(self) -> bool:
        return not self.data_inside

    def outside_points(self) -> np.ndarray:
        """Grid indices where the observed curve leaves the closed band."""
        m = self.lower.defined
        obs = self.observed.values
        out = m & ((obs < self.lower.values) | (obs > self.upper.values))
        return np.flatnonzero(out)
