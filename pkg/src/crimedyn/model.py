"""Vector fields, running cost, Hamiltonian and adjoint right-hand side.

Every function is pure. State-like arguments accept any (s, i, r) triple
(`State`, tuple, or ndarray); scalar arguments broadcast over arrays in
`holling`/`holling_deriv`.
"""
from __future__ import annotations

import numpy as np

from .params import CostWeights, ModelParams


def holling(s, params: ModelParams):
    """Saturating (Holling type II) victimization rate alpha*s / (1 + alpha*beta*s).

    Bounded above by 1/beta when beta > 0; reduces to mass action alpha*s when
    beta = 0.
    """
    return params.alpha * s / (1.0 + params.alpha * params.beta * s)


def holling_deriv(s, params: ModelParams):
    """Derivative of `holling` with respect to s: alpha / (1 + alpha*beta*s)^2."""
    den = 1.0 + params.alpha * params.beta * s
    return params.alpha / (den * den)


def uncontrolled_rhs(x, params: ModelParams) -> np.ndarray:
    """Time derivative (S', I', R') of the uncontrolled system."""
    s, i, r = x
    p = params
    h = holling(s, p)
    ds = p.lam - h * i - p.phi * s + p.gamma2 * i + p.rho * p.omega * r
    di = h * i - (p.phi + p.delta1) * i - p.gamma1 * i - p.gamma2 * i + (1.0 - p.omega) * p.rho * r
    dr = p.gamma1 * i - (p.phi + p.delta2 + p.rho) * r
    return np.array([ds, di, dr])


def controlled_rhs(x, u, params: ModelParams) -> np.ndarray:
    """Time derivative of the three-control system.

    With u = (0, 0, 0) this equals `uncontrolled_rhs` exactly (the term order
    below mirrors it on purpose, so the reduction is bit-identical).
    """
    s, i, r = x
    u1, u2, u3 = u
    p = params
    h = holling(s, p)
    ds = p.lam - (1.0 - u1) * h * i - p.phi * s + (1.0 + u3) * p.gamma2 * i + p.rho * p.omega * r
    di = (
        (1.0 - u1) * h * i
        - (p.phi + p.delta1) * i
        - (1.0 + u2) * p.gamma1 * i
        - (1.0 + u3) * p.gamma2 * i
        + (1.0 - p.omega) * p.rho * r
    )
    dr = (1.0 + u2) * p.gamma1 * i - (p.phi + p.delta2 + p.rho) * r
    return np.array([ds, di, dr])


def running_cost(x, u, weights: CostWeights) -> float:
    """Integrand of the policy objective: I - R + sum_k c_k * u_k^2 / 2."""
    _, i, r = x
    u1, u2, u3 = u
    w = weights
    return i - r + (w.c1 * u1 * u1 + w.c2 * u2 * u2 + w.c3 * u3 * u3) / 2.0


def hamiltonian(x, u, z, params: ModelParams, weights: CostWeights) -> float:
    """Pontryagin Hamiltonian: running cost plus co-state dotted with the field."""
    z1, z2, z3 = z
    f1, f2, f3 = controlled_rhs(x, u, params)
    return running_cost(x, u, weights) + z1 * f1 + z2 * f2 + z3 * f3


def adjoint_rhs(x, z, u, params: ModelParams) -> np.ndarray:
    """Co-state drift (z1', z2', z3') = -dH/d(S, I, R).

    Written out analytically; agreement with central finite differences of
    -hamiltonian is enforced by the test suite.
    """
    s, i, _ = x
    z1, z2, z3 = z
    u1, u2, u3 = u
    p = params
    h = holling(s, p)
    hp = holling_deriv(s, p)
    dz1 = (1.0 - u1) * hp * i * (z1 - z2) + p.phi * z1
    dz2 = (
        ((1.0 - u1) * h - (1.0 + u3) * p.gamma2) * (z1 - z2)
        + (1.0 + u2) * p.gamma1 * (z2 - z3)
        + z2 * (p.phi + p.delta1)
        - 1.0
    )
    dz3 = 1.0 - p.rho * p.omega * (z1 - z2) - z2 * p.rho + (p.phi + p.delta2 + p.rho) * z3
    return np.array([dz1, dz2, dz3])


def hamiltonian_u_grad(x, z, u, params: ModelParams, weights: CostWeights) -> np.ndarray:
    """Gradient of the Hamiltonian with respect to (u1, u2, u3).

    Zeroing each component yields the unclamped stationary controls; the sign
    at a clamped bound is the KKT certificate.
    """
    s, i, _ = x
    z1, z2, z3 = z
    u1, u2, u3 = u
    w = weights
    fsi = holling(s, params) * i
    return np.array([
        w.c1 * u1 + fsi * (z1 - z2),
        w.c2 * u2 - params.gamma1 * i * (z2 - z3),
        w.c3 * u3 + params.gamma2 * i * (z1 - z2),
    ])
