# domain/models/model_params.py
from __future__ import annotations
from dataclasses import dataclass, fields
import math
from typing import Union

from typing_extensions import Literal

from domain.errors import InvalidParameter, ExistenceViolated

ModelName = Literal["poisson", "lgcp", "strauss", "dpp"]


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise InvalidParameter(f"{name} must be a positive finite number, got {value}")
    return value


@dataclass(frozen=True)
class PoissonParams:
    rho: float  # points per unit area

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", _positive("rho", self.rho))


@dataclass(frozen=True)
class LgcpParams:
    """Log-Gaussian Cox process with exponential covariance sigma2 * exp(-d / delta)."""

    rho: float
    sigma2: float
    delta: float

    def __post_init__(self) -> None:
        for f in fields(self):
            object.__setattr__(self, f.name, _positive(f.name, getattr(self, f.name)))

    @property
    def mu(self) -> float:
        # mean of the Gaussian field, chosen so that E exp(Y) = rho
        return math.log(self.rho) - self.sigma2 / 2.0


@dataclass(frozen=True)
class StraussParams:
    beta: float
    gamma: float
    R: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", _positive("beta", self.beta))
        object.__setattr__(self, "R", _positive("R", self.R))
        gamma = float(self.gamma)
        if not 0.0 <= gamma <= 1.0:
            raise InvalidParameter(f"gamma must lie in [0, 1], got {gamma}")
        object.__setattr__(self, "gamma", gamma)

    @property
    def psi(self) -> float:
        return math.log(self.gamma) if self.gamma > 0 else -math.inf


@dataclass(frozen=True)
class DppGaussParams:
    """Gaussian-kernel DPP, C(u, v) = rho * exp(-||(u - v) / kappa||^2)."""

    rho: float
    kappa: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", _positive("rho", self.rho))
        object.__setattr__(self, "kappa", _positive("kappa", self.kappa))
        # tiny slack so that kappa = 1/sqrt(rho*pi) written in floating point passes
        if self.rho * math.pi * self.kappa**2 > 1.0 + 1e-12:
            raise ExistenceViolated(
                f"rho*pi*kappa^2 = {self.rho * math.pi * self.kappa ** 2:.6g} > 1 "
                f"(kappa must be <= {self.kappa_max(self.rho):.6g})"
            )

    @staticmethod
    def kappa_max(rho: float) -> float:
        return 1.0 / math.sqrt(rho * math.pi)


ModelParams = Union[PoissonParams, LgcpParams, StraussParams, DppGaussParams]

PARAMS_BY_MODEL: dict[str, type] = {
    "poisson": PoissonParams,
    "lgcp": LgcpParams,
    "strauss": StraussParams,
    "dpp": DppGaussParams,
}


def params_from_mapping(model: str, values: dict) -> ModelParams:
    """Build the parameter container for `model`; keys must match field names exactly."""
    try:
        cls = PARAMS_BY_MODEL[model]
    except KeyError:
        raise InvalidParameter(f"unknown model '{model}' (expected one of {sorted(PARAMS_BY_MODEL)})") from None
    names = {f.name for f in fields(cls)}
    unknown = set(values) - names
    missing = names - set(values)
    if unknown or missing:
        raise InvalidParameter(
            f"[{model}] keys must be exactly {sorted(names)}; unknown={sorted(unknown)} missing={sorted(missing)}"
        )
    return cls(**{k: float(v) for k, v in values.items()})


def model_name(params: ModelParams) -> str:
    for name, cls in PARAMS_BY_MODEL.items():
        if isinstance(params, cls):
            return name
    raise InvalidParameter(f"not a model parameter container: {params!r}")
