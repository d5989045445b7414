# domain/models/chain_config.py
from __future__ import annotations
from dataclasses import dataclass
import math
from typing import Optional

from domain.errors import InvalidParameter

MIN_BURNIN = 10_000


@dataclass(frozen=True)
class ChainConfig:
    """Markov chain settings for the Strauss samplers."""
    burnin: Optional[int] = None      # birth-death proposals, unconditional chain; None -> burnin_for(expected count)
    burnin_per_point: int = 200       # proposals per expected point of W_ext when burnin is None
    conditional_burnin: int = 1000    # sweeps, conditional chain
    margin: Optional[float] = None    # W_ext = W dilated by margin; None -> 4R
    thinning: int = 1                 # keep a count every `thinning` iterations in the trace
    boundary_proposals: int = 10      # boundary birth-death proposals per conditional sweep

    def __post_init__(self) -> None:
        if (self.burnin is not None and self.burnin < 0) or self.conditional_burnin < 0:
            raise InvalidParameter("burn-in lengths must be >= 0")
        if self.burnin_per_point < 1:
            raise InvalidParameter("burnin_per_point must be >= 1")
        if self.thinning < 1:
            raise InvalidParameter("thinning must be >= 1")
        if self.boundary_proposals < 0:
            raise InvalidParameter("boundary_proposals must be >= 0")
        if self.margin is not None and self.margin < 0:
            raise InvalidParameter("margin must be >= 0")

    def burnin_for(self, expected_count: float) -> int:
        """Unconditional proposals: the explicit burnin, else per-point scaling with a floor of MIN_BURNIN."""
        if self.burnin is not None:
            return self.burnin
        return max(MIN_BURNIN, int(math.ceil(self.burnin_per_point * max(expected_count, 0.0))))

    def margin_for(self, R: float) -> float:
        m = 4.0 * R if self.margin is None else float(self.margin)
        if m < R:
            raise InvalidParameter(f"margin {m} is smaller than the interaction radius {R}")
        return m
