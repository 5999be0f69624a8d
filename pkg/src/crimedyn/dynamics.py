"""Fixed-step RK4 integration of the state system (forward) and the co-state
system (backward), plus invariant-region monitoring.

The sweep solver requires state and adjoint values on identical grids, hence
fixed steps rather than adaptive control. Controls between schedule nodes are
interpolated linearly, so RK4 stage times at half-nodes see the node average.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import adjoint_rhs, controlled_rhs, uncontrolled_rhs
from .params import ModelParams


class NonFiniteState(RuntimeError):
    """A trajectory component became NaN or infinite during integration."""


class GridMismatch(ValueError):
    """Two objects that must share one time grid do not."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of n_steps intervals on [t0, t_final]."""

    t0: float
    t_final: float
    n_steps: int

    def __post_init__(self) -> None:
        if not self.t_final > self.t0:
            raise ValueError("t_final must exceed t0")
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")

    @property
    def dt(self) -> float:
        return (self.t_final - self.t0) / self.n_steps

    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t_final, self.n_steps + 1)


@dataclass
class Trajectory:
    """Grid-aligned sequence of points: states has shape (n_steps+1, 3).

    Also used for co-state trajectories (rows are then (z1, z2, z3)).
    The optional controls array has the same shape.
    """

    grid: TimeGrid
    states: np.ndarray
    controls: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        expected = (self.grid.n_steps + 1, 3)
        if self.states.shape != expected:
            raise ValueError(f"states shape {self.states.shape} != {expected}")
        if self.controls is not None and self.controls.shape != expected:
            raise ValueError(f"controls shape {self.controls.shape} != {expected}")


def rk4_step(rhs: Callable[[float, np.ndarray], np.ndarray], x, t: float, dt: float):
    """One classical 4-stage Runge-Kutta step of ``rhs(t, x)``.

    dt may be negative, which performs a backward step.
    """
    if dt == 0.0:
        raise ValueError("dt must be nonzero")
    k1 = rhs(t, x)
    k2 = rhs(t + dt / 2.0, x + (dt / 2.0) * k1)
    k3 = rhs(t + dt / 2.0, x + (dt / 2.0) * k2)
    k4 = rhs(t + dt, x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _control_interpolator(values: np.ndarray, k: int, dt: float):
    """Linear-in-time control lookup on the step [t_k, t_k+dt] (dt of either sign)."""
    u0 = values[k]
    u1 = values[k + 1] if dt > 0 else values[k - 1]

    def u_of(tau: float) -> np.ndarray:
        theta = tau / dt
        return u0 + (u1 - u0) * theta

    return u_of


def integrate_forward(x0, schedule, params: ModelParams, grid: TimeGrid) -> Trajectory:
    """Integrate the state system from x0 over the grid.

    schedule may be None (uncontrolled field) or a ControlSchedule on the same
    grid. Raises NonFiniteState as soon as a component stops being finite.
    """
    values = None
    if schedule is not None:
        if schedule.grid != grid:
            raise GridMismatch("control schedule grid differs from integration grid")
        values = schedule.values

    n = grid.n_steps
    dt = grid.dt
    states = np.empty((n + 1, 3))
    x = np.asarray(tuple(x0), dtype=float)
    states[0] = x
    for k in range(n):
        t_k = grid.t0 + k * dt
        if values is None:
            rhs = lambda t, y: uncontrolled_rhs(y, params)
        else:
            u_of = _control_interpolator(values, k, dt)
            rhs = lambda t, y: controlled_rhs(y, u_of(t - t_k), params)
        x = rk4_step(rhs, x, t_k, dt)
        if not np.all(np.isfinite(x)):
            raise NonFiniteState(f"non-finite state at t={t_k + dt:.6g} (step {k + 1})")
        states[k + 1] = x
    return Trajectory(grid, states, None if values is None else values.copy())


def integrate_backward(zT, state_traj: Trajectory, schedule, params: ModelParams,
                       grid: TimeGrid) -> Trajectory:
    """Integrate the co-state system from z(t_final) = zT down to t0.

    States (and controls) at stage midpoints are linear interpolations of the
    stored trajectory. The returned sequence is indexed forward in time.
    """
    if state_traj.grid != grid:
        raise GridMismatch("state trajectory grid differs from integration grid")
    values = None
    if schedule is not None:
        if schedule.grid != grid:
            raise GridMismatch("control schedule grid differs from integration grid")
        values = schedule.values

    n = grid.n_steps
    dt = grid.dt
    xs = state_traj.states
    zs = np.empty((n + 1, 3))
    z = np.asarray(tuple(zT), dtype=float)
    zs[n] = z
    zero_u = np.zeros(3)
    for k in range(n, 0, -1):
        t_k = grid.t0 + k * dt
        x_of = _control_interpolator(xs, k, -dt)
        if values is None:
            rhs = lambda t, y: adjoint_rhs(x_of(t - t_k), y, zero_u, params)
        else:
            u_of = _control_interpolator(values, k, -dt)
            rhs = lambda t, y: adjoint_rhs(x_of(t - t_k), y, u_of(t - t_k), params)
        z = rk4_step(rhs, z, t_k, -dt)
        if not np.all(np.isfinite(z)):
            raise NonFiniteState(f"non-finite co-state at t={t_k - dt:.6g}")
        zs[k - 1] = z
    return Trajectory(grid, zs)


@dataclass(frozen=True)
class InvarianceReport:
    """Diagnostics against the invariant region N <= lam/phi (report only)."""

    min_component: float
    max_population: float
    capacity: float
    start_within_capacity: bool
    stays_bounded: bool
    tol: float


def monitor_invariance(traj: Trajectory, params: ModelParams, tol: float = 1e-8) -> InvarianceReport:
    """Check a trajectory against positivity and the population bound.

    stays_bounded means N(t) <= max(N(0), lam/phi) + tol at every node, which
    covers both starts inside the invariant region and the decaying bound for
    starts above it.
    """
    if params.phi <= 0.0:
        raise ValueError("capacity lam/phi requires phi > 0")
    totals = traj.states.sum(axis=1)
    capacity = params.lam / params.phi
    n0 = float(totals[0])
    bound = max(n0, capacity) + tol
    return InvarianceReport(
        min_component=float(traj.states.min()),
        max_population=float(totals.max()),
        capacity=capacity,
        start_within_capacity=n0 <= capacity,
        stays_bounded=bool(np.all(totals <= bound)),
        tol=tol,
    )
