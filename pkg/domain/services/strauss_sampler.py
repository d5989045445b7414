# domain/services/strauss_sampler.py
from __future__ import annotations
import logging
import math
from typing import Callable, Dict, List

import numpy as np

from domain.errors import AttemptsExhausted, InvalidParameter
from domain.models.chain_config import ChainConfig
from domain.models.model_params import StraussParams
from domain.models.point_pattern import PointPattern
from domain.models.seed_spec import SeedSpec
from domain.models.window import Window
from domain.services.poisson_sampler import uniform_points
from domain.services.strauss_model import ripley_count_mean

log = logging.getLogger("samplers.strauss")

Proposal = Callable[[np.random.Generator, Window], np.ndarray]


def uniform_proposal(rng: np.random.Generator, w: Window) -> np.ndarray:
    return uniform_points(rng, 1, w)[0]


def _interaction_ratio(gamma: float, delta: int) -> float:
    """gamma ** delta with 0 ** 0 = 1, 0 ** (>0) = 0 and 0 ** (<0) = inf."""
    if delta == 0:
        return 1.0
    if gamma == 0.0:
        return 0.0 if delta > 0 else math.inf
    return gamma**delta


def _t(points: np.ndarray, u: np.ndarray, r2: float) -> int:
    if points.shape[0] == 0:
        return 0
    d2 = ((points - u) ** 2).sum(axis=1)
    return int(np.count_nonzero(d2 <= r2))


def _in_ring(rng: np.random.Generator, outer: Window, inner: Window) -> np.ndarray:
    """Uniform point on outer minus inner, by rejection."""
    while True:
        u = uniform_points(rng, 1, outer)[0]
        if not inner.contains(u)[0]:
            return u


class StraussChain:
    """
    Metropolis-Hastings chains for a Strauss density beta^n gamma^s on W_ext.

    The unconditional chain is a birth-death chain on the whole of W_ext. The
    conditional chain keeps exactly n points in W (single-point moves) and runs
    birth-death on the ring A = W_ext minus W. Counts of the state are traced every
    `thinning` iterations.
    """

    def __init__(
        self,
        params: StraussParams,
        window: Window,
        cfg: ChainConfig,
        rng: np.random.Generator,
        proposal: Proposal = uniform_proposal,
    ) -> None:
        self.params = params
        self.window = window
        self.cfg = cfg
        self.rng = rng
        self.proposal = proposal
        self.ext = window.dilate(cfg.margin_for(params.R))
        self._r2 = params.R**2
        self.inner = np.empty((0, 2))   # conditional chain: points in W (fixed count)
        self.outer = np.empty((0, 2))   # unconditional: all points of W_ext; conditional: points in A
        self.trace: List[int] = []
        self.stats: Dict[str, int] = {"births": 0, "deaths": 0, "moves": 0, "proposed": 0}
        self._iteration = 0

    # ---- state -----------------------------------------------------------

    def _record(self, count: int) -> None:
        self._iteration += 1
        if self._iteration % self.cfg.thinning == 0:
            self.trace.append(count)

    def _others(self) -> np.ndarray:
        if self.inner.shape[0] == 0:
            return self.outer
        if self.outer.shape[0] == 0:
            return self.inner
        return np.vstack([self.inner, self.outer])

    # ---- birth-death on a region ----------------------------------------

    def _birth_death(self, fixed: np.ndarray, sampler: Callable[[], np.ndarray], area: float) -> None:
        """One birth-death proposal for self.outer, with `fixed` points contributing to t."""
        p = self.params
        n = self.outer.shape[0]
        self.stats["proposed"] += 1
        if self.rng.random() < 0.5:
            u = sampler()
            t = _t(self.outer, u, self._r2) + _t(fixed, u, self._r2)
            ratio = p.beta * area * _interaction_ratio(p.gamma, t) / (n + 1)
            if self.rng.random() < min(1.0, ratio):
                self.outer = np.vstack([self.outer, u])
                self.stats["births"] += 1
        elif n > 0:
            i = int(self.rng.integers(n))
            v = self.outer[i]
            rest = np.delete(self.outer, i, axis=0)
            t = _t(rest, v, self._r2) + _t(fixed, v, self._r2)
            ratio = n / (area * p.beta) * _interaction_ratio(p.gamma, -t)
            if self.rng.random() < min(1.0, ratio):
                self.outer = rest
                self.stats["deaths"] += 1

    # ---- unconditional ---------------------------------------------------

    def expected_count(self) -> float:
        return ripley_count_mean(self.params, area=self.ext.area)

    def start_unconditional(self) -> None:
        mean = self.expected_count()
        n0 = int(self.rng.poisson(mean))
        self.inner = np.empty((0, 2))
        self.outer = uniform_points(self.rng, n0, self.ext)

    def birth_death_step(self) -> None:
        self._birth_death(self.inner, lambda: uniform_points(self.rng, 1, self.ext)[0], self.ext.area)
        self._record(self.outer.shape[0])

    def run_unconditional(self, iterations: int) -> None:
        for _ in range(iterations):
            self.birth_death_step()

    def state_unconditional(self) -> PointPattern:
        return PointPattern(self.outer[self.window.contains(self.outer)], self.window)

    # ---- conditional -----------------------------------------------------

    def start_conditional(self, n: int) -> None:
        ring_area = self.ext.area - self.window.area
        density = ripley_count_mean(self.params, area=self.ext.area) / self.ext.area
        self.inner = uniform_points(self.rng, n, self.window)
        m0 = int(self.rng.poisson(density * ring_area))
        self.outer = np.array([_in_ring(self.rng, self.ext, self.window) for _ in range(m0)]).reshape(-1, 2)

    def move_step(self) -> None:
        """Replace a uniformly chosen point of W by a proposal; accept with min(1, gamma^ds)."""
        n = self.inner.shape[0]
        if n == 0:
            return
        i = int(self.rng.integers(n))
        new = self.proposal(self.rng, self.window)
        old = self.inner[i]
        rest = np.delete(self.inner, i, axis=0)
        ds = (_t(rest, new, self._r2) + _t(self.outer, new, self._r2)) - (
            _t(rest, old, self._r2) + _t(self.outer, old, self._r2)
        )
        if self.rng.random() < min(1.0, _interaction_ratio(self.params.gamma, ds)):
            inner = self.inner.copy()
            inner[i] = new
            self.inner = inner
            self.stats["moves"] += 1

    def boundary_step(self) -> None:
        ring_area = self.ext.area - self.window.area
        self._birth_death(self.inner, lambda: _in_ring(self.rng, self.ext, self.window), ring_area)

    def sweep(self) -> None:
        for _ in range(self.inner.shape[0]):
            self.move_step()
        for _ in range(self.cfg.boundary_proposals):
            self.boundary_step()
        self._record(self.outer.shape[0])

    def run_conditional(self, sweeps: int) -> None:
        for _ in range(sweeps):
            self.sweep()

    def state_conditional(self) -> PointPattern:
        return PointPattern(self.inner, self.window)

    def acceptance(self) -> Dict[str, float]:
        proposed = max(1, self.stats["proposed"])
        return {
            "birth_death_rate": (self.stats["births"] + self.stats["deaths"]) / proposed,
            "moves": float(self.stats["moves"]),
        }


def sample_strauss(p: StraussParams, w: Window, cfg: ChainConfig, seed: SeedSpec) -> PointPattern:
    """Birth-death MH on W_ext = w dilated by cfg's margin; the state after burn-in restricted to w."""
    chain = StraussChain(p, w, cfg, seed.rng())
    chain.start_unconditional()
    burnin = cfg.burnin_for(chain.expected_count())
    chain.run_unconditional(burnin)
    x = chain.state_unconditional()
    log.debug("strauss: %d points in W after %d proposals, acceptance %s", x.n, burnin, chain.acceptance())
    return PointPattern(x.points, w, meta={"trace": list(chain.trace)})


def sample_strauss_conditional(
    n: int, p: StraussParams, w: Window, cfg: ChainConfig, seed: SeedSpec
) -> PointPattern:
    """Gibbs-within-MH on (points in W | N(W) = n, ring points); exactly n points in w."""
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    chain = StraussChain(p, w, cfg, seed.rng())
    chain.start_conditional(n)
    chain.run_conditional(cfg.conditional_burnin)
    log.debug("conditional strauss: n=%d, ring=%d, acceptance %s", n, chain.outer.shape[0], chain.acceptance())
    x = chain.state_conditional()
    return PointPattern(x.points, w, meta={"trace": list(chain.trace)})


def sample_strauss_rejected(
    n: int,
    p: StraussParams,
    w: Window,
    cfg: ChainConfig,
    seed: SeedSpec,
    max_attempts: int = 10_000,
) -> PointPattern:
    """Independent unconditional runs until one has exactly n points in w."""
    for k in range(max_attempts):
        x = sample_strauss(p, w, cfg, seed.child(k))
        if x.n == n:
            return PointPattern(x.points, w, meta={"attempts": k + 1})
    raise AttemptsExhausted(f"no unconditional Strauss run had {n} points in {max_attempts} attempts")
