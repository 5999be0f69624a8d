"""Local parameter-sensitivity analysis of trajectory and threshold metrics.

Indices are normalized central-difference elasticities
(p/Q) * (Q(p(1+h)) - Q(p(1-h))) / (2ph); the ranking over all ten rates
mirrors a per-parameter bar chart. Metrics are deterministic, so identical
inputs give bit-identical indices.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import List

import numpy as np

from .dynamics import TimeGrid, integrate_forward
from .params import PARAM_KEYS, ModelParams, State, param_value, with_param
from .stability import next_gen_r0


class ZeroMetric(ValueError):
    """Elasticity is undefined because the base metric is (numerically) zero."""


class Metric(enum.Enum):
    FINAL_I = "FinalI"
    PEAK_I = "PeakI"
    FINAL_S = "FinalS"
    R0 = "R0"
    UNCONTROLLED_OBJECTIVE = "UncontrolledObjective"


@dataclass(frozen=True)
class SensitivityEntry:
    parameter: str
    metric: Metric
    index: float
    rel_step: float


def metric_value(metric, params: ModelParams, x0: State, grid: TimeGrid) -> float:
    """Scalar summary of the uncontrolled model (R0 needs no trajectory;
    the others integrate forward from x0).

    PeakI is the maximum over grid nodes, without sub-grid interpolation.
    A callable (params, x0, grid) -> float is accepted in place of a Metric
    for ad hoc quantities.
    """
    if callable(metric):
        return float(metric(params, x0, grid))
    if metric is Metric.R0:
        return next_gen_r0(params)
    traj = integrate_forward(x0, None, params, grid)
    xs = traj.states
    if metric is Metric.FINAL_I:
        return float(xs[-1, 1])
    if metric is Metric.PEAK_I:
        return float(xs[:, 1].max())
    if metric is Metric.FINAL_S:
        return float(xs[-1, 0])
    if metric is Metric.UNCONTROLLED_OBJECTIVE:
        return float(np.trapezoid(xs[:, 1] - xs[:, 2], grid.times()))
    raise ValueError(f"unknown metric {metric!r}")


def sensitivity_index(parameter: str, metric, params: ModelParams,
                      x0: State, grid: TimeGrid, rel_step: float = 0.01) -> float:
    """Normalized elasticity of a metric with respect to one rate.

    A zero base value makes the relative step degenerate; in that case an
    absolute step of rel_step is used instead and a warning is emitted.
    """
    if not 0.0 < rel_step < 0.5:
        raise ValueError("rel_step must lie in (0, 0.5)")
    base = metric_value(metric, params, x0, grid)
    if abs(base) < 1e-12:
        name = metric.value if isinstance(metric, Metric) else getattr(
            metric, "__name__", "metric")
        raise ZeroMetric(f"{name} is {base!r}; elasticity undefined")
    p0 = param_value(params, parameter)
    if p0 == 0.0:
        # rates live on [0, inf); fall back to a one-sided absolute step
        warnings.warn(
            f"parameter {parameter!r} is 0; using an absolute forward step of {rel_step}",
            stacklevel=2)
        step = rel_step
        hi = metric_value(metric, with_param(params, parameter, step), x0, grid)
        return (hi - base) / (step * base)
    step = p0 * rel_step
    hi = metric_value(metric, with_param(params, parameter, p0 + step), x0, grid)
    lo = metric_value(metric, with_param(params, parameter, p0 - step), x0, grid)
    return (p0 / base) * (hi - lo) / (2.0 * step)


def rank_parameters(metric: Metric, params: ModelParams, x0: State, grid: TimeGrid,
                    rel_step: float = 0.01) -> List[SensitivityEntry]:
    """All ten rates ranked by |elasticity| descending, ties broken by name."""
    entries = [
        SensitivityEntry(
            parameter=key,
            metric=metric,
            index=sensitivity_index(key, metric, params, x0, grid, rel_step),
            rel_step=rel_step,
        )
        for key in PARAM_KEYS
    ]
    entries.sort(key=lambda e: (-abs(e.index), e.parameter))
    return entries
