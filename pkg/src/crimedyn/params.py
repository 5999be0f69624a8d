"""Parameter and state containers for the crime-contagion compartmental model.

All containers are frozen dataclasses: values are immutable and safe to share
across threads.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np


class DegenerateParams(ValueError):
    """Parameter combination outside the domain of a closed-form expression."""


#: External (config-file / report) names of the ten model rates, in canonical order.
PARAM_KEYS = (
    "lambda", "phi", "delta1", "delta2", "omega",
    "rho", "gamma1", "gamma2", "alpha", "beta",
)

# "lambda" is a Python keyword, hence the field name "lam".
_FIELD_BY_KEY = {key: ("lam" if key == "lambda" else key) for key in PARAM_KEYS}


@dataclass(frozen=True)
class ModelParams:
    """The ten rates of the model.

    lam     : inflow rate of adolescents into the program (individuals/period)
    phi     : program-exit rate (1/period)
    delta1  : extra exit rate of the I group (desistment/withdrawal, 1/period)
    delta2  : facility-risk exit rate of the R group (1/period)
    omega   : fraction of R returning to S after the recovery process (dimensionless)
    rho     : exit rate from correctional facilities (1/period)
    gamma1  : apprehension rate (1/period)
    gamma2  : desistance rate of the I group (1/period)
    alpha   : attack rate of the delinquent group
    beta    : handling time of the saturating incidence
    """

    lam: float
    phi: float
    delta1: float
    delta2: float
    omega: float
    rho: float
    gamma1: float
    gamma2: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        for key in PARAM_KEYS:
            value = param_value(self, key)
            if not np.isfinite(value):
                raise ValueError(f"parameter {key!r} must be finite, got {value!r}")
            if value < 0.0:
                raise ValueError(f"parameter {key!r} must be >= 0, got {value!r}")
        if self.omega > 1.0:
            raise ValueError(f"parameter 'omega' must be <= 1, got {self.omega!r}")

    def derived(self) -> "DerivedParams":
        """Aggregate rates used throughout the equilibrium and stability analysis."""
        q = self.phi + self.delta2 + self.rho
        if q <= 0.0:
            raise DegenerateParams("phi + delta2 + rho must be positive to define sigma2")
        return DerivedParams(
            sigma1=self.phi + self.delta1,
            sigma2=self.gamma1 * self.rho / q,
            gamma_total=self.gamma1 + self.gamma2,
        )


@dataclass(frozen=True)
class DerivedParams:
    """Renamed aggregates: sigma1 = phi+delta1, sigma2 = gamma1*rho/(phi+delta2+rho),
    gamma_total = gamma1+gamma2."""

    sigma1: float
    sigma2: float
    gamma_total: float


def param_value(params: ModelParams, key: str) -> float:
    """Value of a rate by its external name (one of PARAM_KEYS)."""
    try:
        return getattr(params, _FIELD_BY_KEY[key])
    except KeyError:
        raise KeyError(f"unknown parameter name {key!r}") from None


def with_param(params: ModelParams, key: str, value: float) -> ModelParams:
    """Copy of ``params`` with one rate replaced (used by perturbation sweeps)."""
    if key not in _FIELD_BY_KEY:
        raise KeyError(f"unknown parameter name {key!r}")
    return dataclasses.replace(params, **{_FIELD_BY_KEY[key]: value})


@dataclass(frozen=True)
class State:
    """Compartment populations (S, I, R). Nonnegativity is monitored by the
    integrator, not enforced at construction."""

    s: float
    i: float
    r: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s, self.i, self.r], dtype=float)

    @classmethod
    def from_array(cls, x) -> "State":
        s, i, r = x
        return cls(float(s), float(i), float(r))

    def __iter__(self):
        yield self.s
        yield self.i
        yield self.r


@dataclass(frozen=True)
class Controls:
    """Effort levels of the three policies (preventive, punitive, reintegration)."""

    u1: float
    u2: float
    u3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u1, self.u2, self.u3], dtype=float)

    def __iter__(self):
        yield self.u1
        yield self.u2
        yield self.u3


ZERO_CONTROLS = Controls(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class CostWeights:
    """Quadratic cost coefficients of the three controls, strictly positive."""

    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0

    def __post_init__(self) -> None:
        for name in ("c1", "c2", "c3"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"cost weight {name!r} must be > 0")

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=float)


@dataclass(frozen=True)
class AdjointState:
    """Co-state vector; components are free-signed."""

    z1: float
    z2: float
    z3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.z1, self.z2, self.z3], dtype=float)

    @classmethod
    def from_array(cls, z) -> "AdjointState":
        z1, z2, z3 = z
        return cls(float(z1), float(z2), float(z3))

    def __iter__(self):
        yield self.z1
        yield self.z2
        yield self.z3
