"""Closed-form equilibria of the uncontrolled system and their existence
conditions.

The crime-free equilibrium E0 = (lam/phi, 0, 0) always exists. An endemic
point E1 exists when either condition A1 (incidence at capacity exceeds the
aggregate removal level c) or condition A2 holds; S-hat solves
holling(S) = c in closed form because the incidence is exactly invertible
whenever beta*c != 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .model import holling
from .params import DegenerateParams, ModelParams, State


class Regime(enum.Enum):
    NO_ENDEMIC = "NoEndemic"
    A1_ENDEMIC = "A1Endemic"
    A2_ENDEMIC = "A2Endemic"


@dataclass(frozen=True)
class EquilibriumReport:
    """Equilibria plus the existence-condition flags that produced them.

    condition_a1 is the pair (dagger, underdagger); degenerate marks the
    division-by-zero boundary sigma1 + gamma1 - sigma2 = 0, which the
    existence conditions exclude only implicitly.
    """

    e0: State
    e1: Optional[State]
    condition_a1: Tuple[bool, bool]
    condition_a2: bool
    regime: Regime
    degenerate: bool = False


def crime_free(params: ModelParams) -> State:
    """The equilibrium (lam/phi, 0, 0) with no criminal activity."""
    if params.phi == 0.0:
        raise DegenerateParams("crime-free equilibrium requires phi > 0")
    return State(params.lam / params.phi, 0.0, 0.0)


def removal_level(params: ModelParams) -> float:
    """The threshold c = sigma1 + gamma - (1 - omega)*sigma2 that the incidence
    must reach for an endemic point to exist."""
    d = params.derived()
    return d.sigma1 + d.gamma_total - (1.0 - params.omega) * d.sigma2


def check_conditions(params: ModelParams) -> Tuple[bool, bool, bool]:
    """Evaluate (a1_dagger, a1_underdagger, a2) exactly as stated.

    a1_dagger:      sigma1 + gamma1 - sigma2 > 0
    a1_underdagger: c < holling(lam/phi)
    a2:             holling(lam/phi) < c < min(1/beta, gamma2 + omega*sigma2)
    with all inequalities strict. For nonnegative rates with phi > 0, sigma2
    never exceeds gamma1, so a2 cannot actually occur; the flag is still
    reported as written.
    """
    if params.phi == 0.0:
        raise DegenerateParams("existence conditions require phi > 0")
    d = params.derived()
    c = removal_level(params)
    h_cap = holling(params.lam / params.phi, params)
    dagger = d.sigma1 + params.gamma1 - d.sigma2 > 0.0
    underdagger = c < h_cap
    ceiling = min(
        math.inf if params.beta == 0.0 else 1.0 / params.beta,
        params.gamma2 + params.omega * d.sigma2,
    )
    a2 = h_cap < c < ceiling
    return dagger, underdagger, a2


def endemic(params: ModelParams) -> EquilibriumReport:
    """Closed-form endemic equilibrium, when one of the existence conditions holds.

    S-hat inverts the incidence at level c, I-hat = (lam - phi*S-hat) /
    (sigma1 + gamma1 - sigma2), R-hat = gamma1*I-hat / (phi + delta2 + rho).
    """
    e0 = crime_free(params)
    dagger, underdagger, a2 = check_conditions(params)
    a1 = dagger and underdagger
    if not (a1 or a2):
        return EquilibriumReport(e0, None, (dagger, underdagger), a2, Regime.NO_ENDEMIC)

    d = params.derived()
    c = removal_level(params)
    if abs(1.0 - params.beta * c) < 1e-14:
        raise DegenerateParams(
            "beta*c = 1 while an existence condition claims an endemic point")
    denom = d.sigma1 + params.gamma1 - d.sigma2
    if denom == 0.0:
        return EquilibriumReport(
            e0, None, (dagger, underdagger), a2, Regime.NO_ENDEMIC, degenerate=True)

    s_hat = c / (params.alpha * (1.0 - params.beta * c))
    i_hat = (params.lam - params.phi * s_hat) / denom
    r_hat = params.gamma1 * i_hat / (params.phi + params.delta2 + params.rho)
    regime = Regime.A1_ENDEMIC if a1 else Regime.A2_ENDEMIC
    return EquilibriumReport(
        e0, State(s_hat, i_hat, r_hat), (dagger, underdagger), a2, regime)
