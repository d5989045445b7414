#application/model_registry.py
from __future__ import annotations
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Optional

from application.ports import SamplerOptions
from domain.errors import InvalidParameter
from domain.models.dpp_spectrum import DppSpectrum
from domain.models.model_params import (
    DppGaussParams,
    LgcpParams,
    ModelParams,
    PoissonParams,
    StraussParams,
    model_name,
)
from domain.models.point_pattern import PointPattern
from domain.models.seed_spec import SeedSpec
from domain.models.window import Window
from domain.services.dpp_model import dpp_spectrum
from domain.services.dpp_sampler import sample_dpp, sample_dpp_conditional
from domain.services.lgcp_sampler import sample_lgcp, sample_lgcp_conditional
from domain.services.poisson_sampler import sample_binomial, sample_poisson
from domain.services.strauss_sampler import sample_strauss, sample_strauss_conditional

Unconditional = Callable[[ModelParams, SeedSpec, SamplerOptions], PointPattern]
Conditional = Callable[[int, ModelParams, SeedSpec, SamplerOptions], PointPattern]


@dataclass(frozen=True)
class ModelJob:
    name: str
    params_type: type
    simulate: Unconditional
    simulate_conditional: Conditional
    fit_model: str  # key understood by domain.services.model_fitting.fit_model


@lru_cache(maxsize=16)
def cached_spectrum(p: DppGaussParams, w: Window, eps: Optional[float], max_frequency: int) -> DppSpectrum:
    return dpp_spectrum(p, w, eps, max_frequency)


def _spectrum(p: DppGaussParams, o: SamplerOptions) -> DppSpectrum:
    return cached_spectrum(p, o.window, o.dpp_eps, o.dpp_max_frequency)


def default_registry() -> Dict[str, ModelJob]:
    return {
        "poisson": ModelJob(
            name="poisson",
            params_type=PoissonParams,
            simulate=lambda p, seed, o: sample_poisson(p, o.window, seed),
            simulate_conditional=lambda n, p, seed, o: sample_binomial(n, o.window, seed),
            fit_model="poisson",
        ),
        "lgcp": ModelJob(
            name="lgcp",
            params_type=LgcpParams,
            simulate=lambda p, seed, o: sample_lgcp(p, o.window, seed, nx=o.field_grid),
            simulate_conditional=lambda n, p, seed, o: sample_lgcp_conditional(
                n, p, o.window, seed, nx=o.field_grid, max_attempts=o.max_attempts
            ),
            fit_model="lgcp",
        ),
        "strauss": ModelJob(
            name="strauss",
            params_type=StraussParams,
            simulate=lambda p, seed, o: sample_strauss(p, o.window, o.chain, seed),
            simulate_conditional=lambda n, p, seed, o: sample_strauss_conditional(n, p, o.window, o.chain, seed),
            fit_model="strauss",
        ),
        "dpp": ModelJob(
            name="dpp",
            params_type=DppGaussParams,
            simulate=lambda p, seed, o: sample_dpp(_spectrum(p, o), o.window, seed),
            simulate_conditional=lambda n, p, seed, o: sample_dpp_conditional(
                n, _spectrum(p, o), o.window, seed, max_attempts=o.max_attempts
            ),
            fit_model="dpp",
        ),
    }


def job_for(params: ModelParams, registry: Optional[Dict[str, ModelJob]] = None) -> ModelJob:
    registry = registry or default_registry()
    name = model_name(params)
    if name not in registry:
        raise InvalidParameter(f"no sampler registered for {name}")
    return registry[name]


def simulate(params: ModelParams, seed: SeedSpec, options: SamplerOptions, n: Optional[int] = None) -> PointPattern:
    """Unconditional draw, or a draw conditioned on N(W) = n."""
    job = job_for(params)
    if n is None:
        return job.simulate(params, seed, options)
    return job.simulate_conditional(int(n), params, seed, options)
