# domain/models/curve.py
from __future__ import annotations
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from typing_extensions import Literal

from domain.errors import InvalidParameter
from domain.models.rgrid import RGrid

CurveKind = Literal["K", "F", "G", "J"]
CURVE_KINDS: tuple[str, ...] = ("K", "F", "G", "J")


@dataclass(frozen=True, eq=False)
class Curve:
    """A summary function sampled on `rgrid`; `defined[i]` is False where the value is 0/0-undefined."""

    rgrid: RGrid
    values: np.ndarray
    kind: CurveKind
    defined: Optional[np.ndarray] = field(default=None)

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float).ravel()
        if vals.shape[0] != len(self.rgrid):
            raise InvalidParameter(f"{vals.shape[0]} values for an r-grid of length {len(self.rgrid)}")
        if self.kind not in CURVE_KINDS:
            raise InvalidParameter(f"unknown curve kind {self.kind!r}")
        mask = np.ones(vals.shape, dtype=bool) if self.defined is None else np.array(self.defined, dtype=bool).ravel()
        if mask.shape != vals.shape:
            raise InvalidParameter("defined-mask length must match values")
        if not np.all(np.isfinite(vals[mask])):
            raise InvalidParameter("values must be finite wherever the curve is defined")
        vals.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "defined", mask)

    @property
    def r(self) -> np.ndarray:
        return self.rgrid.values

    def __len__(self) -> int:
        return int(self.values.size)
