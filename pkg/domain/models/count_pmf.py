# domain/models/count_pmf.py
from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from domain.errors import InvalidParameter

PMF_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class CountPmf:
    """Probability mass function of a point count on n = 0..n_max."""

    probabilities: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.probabilities, dtype=float).ravel()
        if p.size == 0 or np.any(p < 0) or not np.all(np.isfinite(p)):
            raise InvalidParameter("probabilities must be finite and nonnegative")
        if abs(p.sum() - 1.0) > PMF_TOLERANCE * max(1, p.size):
            raise InvalidParameter(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @property
    def n_max(self) -> int:
        return int(self.probabilities.size - 1)

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.probabilities.size)

    def mean(self) -> float:
        return float(np.dot(self.support, self.probabilities))

    def variance(self) -> float:
        m = self.mean()
        return float(np.dot((self.support - m) ** 2, self.probabilities))

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.probabilities)

    def pmf(self, n: int) -> float:
        return float(self.probabilities[n]) if 0 <= n <= self.n_max else 0.0
