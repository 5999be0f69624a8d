"""Linearization, eigenvalues, Routh-Hurwitz classification and the
next-generation basic reproduction number.

Verdicts within 1e-9 of a boundary are reported as INDETERMINATE instead of
forcing a call either way; the analysis treats only strict inequalities.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .equilibria import Regime, crime_free, endemic, removal_level
from .model import holling, holling_deriv
from .params import DegenerateParams, ModelParams, State

#: Margin below which a stability verdict is not forced.
MARGIN = 1e-9


class NoEndemicEquilibrium(ValueError):
    """Requested an E1 analysis for parameters without an endemic point."""


class SingularV(ArithmeticError):
    """The transition matrix of the next-generation construction is singular."""


class Classification(enum.Enum):
    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    INDETERMINATE = "Indeterminate"


class Method(enum.Enum):
    CLOSED_FORM_E0 = "ClosedFormE0"
    ROUTH_HURWITZ_E1 = "RouthHurwitzE1"
    NUMERIC_EIGEN = "NumericEigen"


@dataclass(frozen=True)
class StabilityReport:
    point: State
    eigenvalues: Tuple[complex, complex, complex]
    classification: Classification
    method: Method
    r0: Optional[float] = None


@dataclass(frozen=True)
class CharCoeffs:
    """Coefficients of the characteristic polynomial at E1, written as
    p(x) = -x^3 + tau2*x^2 - tau1*x + d."""

    tau2: float
    tau1: float
    d: float


def jacobian_at(x, params: ModelParams) -> np.ndarray:
    """Jacobian of the uncontrolled field, with the incidence and its slope
    evaluated at the given state."""
    s, i, _ = x
    p = params
    h = holling(s, p)
    hp = holling_deriv(s, p)
    return np.array([
        [-hp * i - p.phi, -h + p.gamma2, p.rho * p.omega],
        [hp * i, h - (p.phi + p.delta1) - (p.gamma1 + p.gamma2), (1.0 - p.omega) * p.rho],
        [0.0, p.gamma1, -(p.phi + p.delta2 + p.rho)],
    ])


def _solve_cubic(a: float, b: float, c: float) -> Tuple[complex, complex, complex]:
    """Roots of x^3 + a*x^2 + b*x + c, via the depressed cubic.

    Uses the trigonometric form for three real roots and a sign-stable Cardano
    branch otherwise, avoiding cancellation in the dominant cube root.
    """
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c

    if p == 0.0 and q == 0.0:
        t = (0.0, 0.0, 0.0)
    elif p == 0.0:
        r = math.copysign(abs(q) ** (1.0 / 3.0), -q)
        t = (r, r * cmath.exp(2j * math.pi / 3.0), r * cmath.exp(-2j * math.pi / 3.0))
    else:
        disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
        if disc <= 0.0:
            # three real roots
            m = 2.0 * math.sqrt(-p / 3.0)
            arg = 3.0 * q / (p * m)
            arg = min(1.0, max(-1.0, arg))
            theta = math.acos(arg) / 3.0
            t = tuple(m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3))
        else:
            root = math.sqrt(disc)
            # pick the larger-magnitude cube-root argument to dodge cancellation
            u_arg = -q / 2.0 - root if q > 0.0 else -q / 2.0 + root
            u = math.copysign(abs(u_arg) ** (1.0 / 3.0), u_arg)
            v = -p / (3.0 * u)
            t1 = u + v
            re = -t1 / 2.0
            im = (u - v) * math.sqrt(3.0) / 2.0
            t = (t1, complex(re, im), complex(re, -im))
    roots = tuple(complex(ti) - shift for ti in t)
    return tuple(sorted(roots, key=lambda lam: (-lam.real, -lam.imag)))


def eigen3(m: np.ndarray) -> Tuple[complex, complex, complex]:
    """Eigenvalues of a real 3x3 matrix as roots of its characteristic cubic,
    sorted by descending real part."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise ValueError("eigen3 expects a finite 3x3 matrix")
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    minors = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    det = float(np.linalg.det(m))
    # characteristic polynomial: x^3 - tr*x^2 + minors*x - det
    return _solve_cubic(-tr, minors, -det)


def _e0_closed_form_eigenvalues(params: ModelParams) -> Tuple[complex, complex, complex]:
    """E0 spectrum: -phi plus the quadratic pair of the (I, R) block."""
    d = params.derived()
    q = params.phi + params.delta2 + params.rho
    nu = holling(params.lam / params.phi, params) - (d.sigma1 + d.gamma_total)
    upsilon = nu * q + (1.0 - params.omega) * params.gamma1 * params.rho
    rad = cmath.sqrt((nu - q) ** 2 + 4.0 * upsilon)
    lam1 = ((nu - q) + rad) / 2.0
    lam2 = ((nu - q) - rad) / 2.0
    roots = (complex(-params.phi), lam1, lam2)
    return tuple(sorted(roots, key=lambda lam: (-lam.real, -lam.imag)))


def classify_e0(params: ModelParams) -> StabilityReport:
    """Stability of the crime-free point by the threshold comparison
    holling(lam/phi) vs the removal level c, with closed-form eigenvalues
    cross-checked against `eigen3` of the Jacobian."""
    e0 = crime_free(params)
    eig_closed = _e0_closed_form_eigenvalues(params)
    eig_num = eigen3(jacobian_at(e0.as_array(), params))
    scale = max(1.0, max(abs(v) for v in eig_closed))
    if max(abs(a - b) for a, b in zip(eig_closed, eig_num)) > 1e-7 * scale:
        raise ArithmeticError("closed-form and numeric E0 spectra disagree")

    gap = holling(params.lam / params.phi, params) - removal_level(params)
    if gap > MARGIN:
        verdict = Classification.UNSTABLE
    elif gap < -MARGIN:
        verdict = Classification.ASYMPTOTICALLY_STABLE
    else:
        verdict = Classification.INDETERMINATE
    return StabilityReport(e0, eig_closed, verdict, Method.CLOSED_FORM_E0,
                           r0=next_gen_r0(params))


def _jacobian_e1(params: ModelParams) -> Tuple[State, np.ndarray]:
    report = endemic(params)
    if report.e1 is None:
        raise NoEndemicEquilibrium("no endemic equilibrium for these parameters")
    return report.e1, jacobian_at(report.e1.as_array(), params)


def char_coeffs_e1(params: ModelParams) -> CharCoeffs:
    """tau2, tau1, d from their closed forms, cross-checked against the trace,
    principal minors and determinant of the Jacobian at E1."""
    e1, a1m = _jacobian_e1(params)
    p = params
    d = p.derived()
    q = p.phi + p.delta2 + p.rho
    slope_mass = holling_deriv(e1.s, p) * e1.i
    tau2 = -(slope_mass + (1.0 - p.omega) * d.sigma2 + 2.0 * p.phi + p.delta2 + p.rho)
    tau1 = (p.phi * (q + (1.0 - p.omega) * d.sigma2)
            + slope_mass * (q + d.sigma1 + p.gamma1))
    det = (p.phi * e1.s - p.lam) * q * holling_deriv(e1.s, p)

    trace = float(np.trace(a1m))
    minors = float(
        a1m[0, 0] * a1m[1, 1] - a1m[0, 1] * a1m[1, 0]
        + a1m[0, 0] * a1m[2, 2] - a1m[0, 2] * a1m[2, 0]
        + a1m[1, 1] * a1m[2, 2] - a1m[1, 2] * a1m[2, 1]
    )
    det_num = float(np.linalg.det(a1m))
    for closed, numeric, name in ((tau2, trace, "tau2"), (tau1, minors, "tau1"),
                                  (det, det_num, "d")):
        if abs(closed - numeric) > 1e-9 * max(1.0, abs(closed)):
            raise ArithmeticError(f"{name} closed form disagrees with the Jacobian")
    return CharCoeffs(tau2=tau2, tau1=tau1, d=det)


def classify_e1(params: ModelParams) -> StabilityReport:
    """Routh-Hurwitz verdict at E1 (A1 regime: stable iff tau2*tau1 - d < 0;
    A2 regime: unstable), cross-checked against the numeric spectrum."""
    report = endemic(params)
    if report.e1 is None:
        raise NoEndemicEquilibrium("no endemic equilibrium for these parameters")
    eig = eigen3(jacobian_at(report.e1.as_array(), params))
    max_re = max(v.real for v in eig)

    if report.regime is Regime.A2_ENDEMIC:
        verdict = Classification.UNSTABLE
    else:
        coeffs = char_coeffs_e1(params)
        rh = coeffs.tau2 * coeffs.tau1 - coeffs.d
        if abs(rh) < MARGIN or abs(max_re) < MARGIN:
            verdict = Classification.INDETERMINATE
        else:
            verdict = (Classification.ASYMPTOTICALLY_STABLE if rh < 0.0
                       else Classification.UNSTABLE)
            eig_verdict = (Classification.ASYMPTOTICALLY_STABLE if max_re < 0.0
                           else Classification.UNSTABLE)
            if verdict is not eig_verdict:
                raise ArithmeticError(
                    "Routh-Hurwitz and eigenvalue verdicts disagree at E1")
    return StabilityReport(report.e1, eig, verdict, Method.ROUTH_HURWITZ_E1)


def _next_gen_matrices(params: ModelParams) -> Tuple[np.ndarray, np.ndarray]:
    """New-infection and transition Jacobians at the infection-free point,
    in (I, R, S) coordinates."""
    p = params
    h_cap = holling(p.lam / p.phi, p)
    f = np.zeros((3, 3))
    f[0, 0] = h_cap
    v = np.array([
        [p.phi + p.delta1 + p.gamma1 + p.gamma2, -(1.0 - p.omega) * p.rho, 0.0],
        [-p.gamma1, p.phi + p.delta2 + p.rho, 0.0],
        [h_cap - p.gamma2, -p.omega * p.rho, p.phi],
    ])
    return f, v


def next_gen_r0(params: ModelParams) -> float:
    """Basic reproduction number: spectral radius of F V^-1.

    Equals (phi+delta2+rho) * holling(lam/phi) / |(phi+delta1+gamma1+gamma2) *
    (phi+delta2+rho) - (1-omega)*rho*gamma1|, which is exactly the E0
    instability threshold (r0 > 1 iff E0 is unstable). See `r0_delta1_form`
    for the delta1-numerator variant.
    """
    if params.phi == 0.0:
        raise DegenerateParams("next-generation construction requires phi > 0")
    f, v = _next_gen_matrices(params)
    det_v = float(np.linalg.det(v))
    if abs(det_v) < 1e-14:
        raise SingularV(f"transition matrix is singular (det = {det_v:.3e})")
    k = f @ np.linalg.inv(v)
    if np.any(k[1:] != 0.0):
        raise ArithmeticError("next-generation matrix is not rank one")
    spectral = abs(float(k[0, 0]))

    p = params
    denom = abs((p.phi + p.delta1 + p.gamma1 + p.gamma2) * (p.phi + p.delta2 + p.rho)
                - (1.0 - p.omega) * p.rho * p.gamma1)
    closed = (p.phi + p.delta2 + p.rho) * holling(p.lam / p.phi, p) / denom
    if abs(spectral - closed) > 1e-10 * max(1.0, closed):
        raise ArithmeticError("spectral radius disagrees with the closed form")
    return closed


def r0_delta1_form(params: ModelParams) -> float:
    """Closed-form variant with (phi + delta1 + rho) in the numerator, where
    `next_gen_r0` carries (phi + delta2 + rho); kept for side-by-side
    comparison with analyses that use the delta1 convention.

    It is not the spectral radius of F V^-1, and its comparison with 1 does
    not match the E0 instability threshold whenever delta1 != delta2.
    """
    if params.phi == 0.0:
        raise DegenerateParams("requires phi > 0")
    p = params
    denom = abs((p.phi + p.delta1 + p.gamma1 + p.gamma2) * (p.phi + p.delta2 + p.rho)
                - (1.0 - p.omega) * p.rho * p.gamma1)
    if denom < 1e-14:
        raise SingularV("degenerate denominator")
    return (p.phi + p.delta1 + p.rho) * holling(p.lam / p.phi, p) / denom
