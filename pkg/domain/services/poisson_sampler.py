# domain/services/poisson_sampler.py
from __future__ import annotations

import numpy as np

from domain.errors import InvalidParameter
from domain.models.model_params import PoissonParams
from domain.models.point_pattern import PointPattern
from domain.models.seed_spec import SeedSpec
from domain.models.window import Window


def uniform_points(rng: np.random.Generator, n: int, w: Window) -> np.ndarray:
    u = rng.random((n, 2))
    return np.column_stack([w.xmin + u[:, 0] * w.width, w.ymin + u[:, 1] * w.height])


def sample_binomial(n: int, w: Window, seed: SeedSpec) -> PointPattern:
    """n i.i.d. uniform points on w (Poisson process conditioned on N(W) = n)."""
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    rng = seed.rng()
    return PointPattern(uniform_points(rng, int(n), w), w)


def sample_poisson(p: PoissonParams, w: Window, seed: SeedSpec) -> PointPattern:
    rng = seed.rng()
    n = int(rng.poisson(p.rho * w.area))
    return PointPattern(uniform_points(rng, n, w), w)
