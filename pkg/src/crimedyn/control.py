"""Three-control policy optimization by forward-backward sweep.

Each iteration integrates the states forward with the current schedule,
integrates the co-states backward from z(T_F) = 0, forms the clamped
stationary controls at every node and relaxes toward them. The scheme stops
when the max-norm relative control change drops below the tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .dynamics import (GridMismatch, NonFiniteState, TimeGrid, Trajectory,
                       integrate_backward, integrate_forward)
from .model import holling
from .params import Controls, CostWeights, ModelParams


class Diverged(RuntimeError):
    """The sweep produced a non-finite objective or trajectory."""


@dataclass(frozen=True)
class ControlBounds:
    """Per-control box constraints, 0 <= lower_k <= upper_k."""

    lower: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    upper: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        for k, (lo, hi) in enumerate(zip(self.lower, self.upper), start=1):
            if not 0.0 <= lo <= hi:
                raise ValueError(f"bounds for u{k} must satisfy 0 <= min <= max")

    def lower_array(self) -> np.ndarray:
        return np.array(self.lower, dtype=float)

    def upper_array(self) -> np.ndarray:
        return np.array(self.upper, dtype=float)


FULL_MASK = (True, True, True)


@dataclass
class ControlSchedule:
    """Per-node control values on a grid. Inactive controls are pinned to 0;
    active ones must sit inside their bounds."""

    grid: TimeGrid
    values: np.ndarray
    bounds: ControlBounds = field(default_factory=ControlBounds)
    active: Tuple[bool, bool, bool] = FULL_MASK

    def __post_init__(self) -> None:
        expected = (self.grid.n_steps + 1, 3)
        if self.values.shape != expected:
            raise ValueError(f"schedule shape {self.values.shape} != {expected}")
        lo, hi = self.bounds.lower_array(), self.bounds.upper_array()
        for k in range(3):
            col = self.values[:, k]
            if self.active[k]:
                if np.any(col < lo[k]) or np.any(col > hi[k]):
                    raise ValueError(f"u{k + 1} leaves its bounds")
            elif np.any(col != 0.0):
                raise ValueError(f"inactive control u{k + 1} must be identically 0")

    @classmethod
    def inactive(cls, grid: TimeGrid) -> "ControlSchedule":
        """All-zero schedule with every control switched off."""
        return cls(grid, np.zeros((grid.n_steps + 1, 3)), ControlBounds(),
                   (False, False, False))


@dataclass(frozen=True)
class SweepOptions:
    max_iters: int = 500
    tol: float = 1e-6
    relaxation: float = 0.5
    #: use a (z2 - z3) numerator for u3 instead of the stationary (z2 - z1);
    #: kept for comparison with analyses that use that convention.
    u3_compat: bool = False

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0.0:
            raise ValueError("tol must be > 0")
        if not 0.0 < self.relaxation <= 1.0:
            raise ValueError("relaxation must lie in (0, 1]")


@dataclass
class OptimizationResult:
    state_traj: Trajectory
    adjoint_traj: Trajectory
    schedule: ControlSchedule
    objective: float
    iterations: int
    converged: bool
    stationarity_residual: float


def _candidates(states: np.ndarray, adjoints: np.ndarray, params: ModelParams,
                weights: CostWeights, u3_compat: bool) -> np.ndarray:
    """Unclamped stationary controls at every node (vectorized)."""
    s, i = states[:, 0], states[:, 1]
    z1, z2, z3 = adjoints[:, 0], adjoints[:, 1], adjoints[:, 2]
    fsi = holling(s, params) * i
    u3_gap = (z2 - z3) if u3_compat else (z2 - z1)
    out = np.empty_like(states)
    out[:, 0] = (z2 - z1) * fsi / weights.c1
    out[:, 1] = (z2 - z3) * params.gamma1 * i / weights.c2
    out[:, 2] = u3_gap * params.gamma2 * i / weights.c3
    return out


def pointwise_control(x, z, params: ModelParams, weights: CostWeights,
                      bounds: ControlBounds, u3_compat: bool = False) -> Controls:
    """Clamped stationary control at a single (state, co-state) point."""
    states = np.asarray(tuple(x), dtype=float).reshape(1, 3)
    adjoints = np.asarray(tuple(z), dtype=float).reshape(1, 3)
    cand = _candidates(states, adjoints, params, weights, u3_compat)[0]
    clipped = np.clip(cand, bounds.lower_array(), bounds.upper_array())
    return Controls(*clipped)


def objective(state_traj: Trajectory, schedule: Optional[ControlSchedule],
              weights: CostWeights) -> float:
    """Composite-trapezoid value of the cost integral over the trajectory grid.

    schedule None means zero control effort (uncontrolled run).
    """
    if schedule is not None and schedule.grid != state_traj.grid:
        raise GridMismatch("objective requires one shared grid")
    xs = state_traj.states
    run = xs[:, 1] - xs[:, 2]
    if schedule is not None:
        u = schedule.values
        w = weights.as_array()
        run = run + 0.5 * (u * u) @ w
    return float(np.trapezoid(run, state_traj.grid.times()))


def _stationarity(states: np.ndarray, adjoints: np.ndarray, values: np.ndarray,
                  params: ModelParams, weights: CostWeights,
                  bounds: ControlBounds, active: Tuple[bool, bool, bool],
                  u3_compat: bool) -> float:
    """Max |dH/du_k| over nodes where an active control is strictly interior.

    Interior means the clamp is inactive, i.e. the unclamped stationary
    candidate lies strictly inside the bounds; at clamped nodes the KKT sign
    condition applies instead of stationarity.
    """
    cand = _candidates(states, adjoints, params, weights, u3_compat)
    grad = (values - cand) * weights.as_array()
    lo, hi = bounds.lower_array(), bounds.upper_array()
    interior = (cand > lo) & (cand < hi) & np.array(active, dtype=bool)
    if not interior.any():
        return 0.0
    return float(np.abs(grad[interior]).max())


def forward_backward_sweep(x0, params: ModelParams, weights: CostWeights,
                           bounds: ControlBounds, active: Tuple[bool, bool, bool],
                           grid: TimeGrid,
                           options: Optional[SweepOptions] = None) -> OptimizationResult:
    """Solve the policy problem on the grid, returning converged trajectories,
    the objective and stationarity diagnostics.

    Raises Diverged on a non-finite trajectory or objective; exhausting
    max_iters is reported through the converged flag, not an error.
    """
    opts = options or SweepOptions()
    mask = np.array(active, dtype=bool)
    lo, hi = bounds.lower_array(), bounds.upper_array()

    values = np.zeros((grid.n_steps + 1, 3))
    values[:, mask] = np.clip(values[:, mask], lo[mask], hi[mask])

    def run_schedule(vals: np.ndarray) -> ControlSchedule:
        return ControlSchedule(grid, vals, bounds, tuple(mask))

    converged = False
    iterations = 0
    state_traj = adjoint_traj = None
    try:
        for iterations in range(1, opts.max_iters + 1):
            schedule = run_schedule(values)
            state_traj = integrate_forward(x0, schedule, params, grid)
            adjoint_traj = integrate_backward((0.0, 0.0, 0.0), state_traj,
                                              schedule, params, grid)
            cand = _candidates(state_traj.states, adjoint_traj.states, params,
                               weights, opts.u3_compat)
            cand = np.clip(cand, lo, hi)
            new = np.where(mask, opts.relaxation * cand + (1.0 - opts.relaxation) * values,
                           0.0)
            change = np.abs(new - values).max() / max(1.0, np.abs(new).max())
            values = new
            if change <= opts.tol:
                converged = True
                break

        # recompute trajectories consistent with the final schedule
        schedule = run_schedule(values)
        state_traj = integrate_forward(x0, schedule, params, grid)
        adjoint_traj = integrate_backward((0.0, 0.0, 0.0), state_traj, schedule,
                                          params, grid)
    except NonFiniteState as exc:
        raise Diverged(f"sweep diverged: {exc}") from exc

    cost = objective(state_traj, schedule, weights)
    if not np.isfinite(cost):
        raise Diverged(f"objective is not finite ({cost!r})")
    residual = _stationarity(state_traj.states, adjoint_traj.states, values,
                             params, weights, bounds, tuple(mask), opts.u3_compat)
    return OptimizationResult(
        state_traj=state_traj,
        adjoint_traj=adjoint_traj,
        schedule=schedule,
        objective=cost,
        iterations=iterations,
        converged=converged,
        stationarity_residual=residual,
    )
