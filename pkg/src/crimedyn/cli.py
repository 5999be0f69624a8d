"""Command-line interface.

    crimedyn <subcommand> --config <path-or-bundled-name> [--out DIR] [--svg]

Subcommands: simulate, analyze, optimize, sensitivity, sweep.
Exit codes: 0 success, 1 validation/parse error, 2 solver non-convergence
(partial outputs are still written and a warning goes to stderr).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import ParseError, ScenarioConfig, ValidationError, resolve_config
from .control import forward_backward_sweep, objective
from .dynamics import integrate_forward, rk4_step
from .equilibria import endemic
from .model import uncontrolled_rhs
from .params import ModelParams, State, with_param
from .sensitivity import Metric, rank_parameters
from .stability import classify_e0, classify_e1, next_gen_r0, r0_delta1_form

DEFAULT_SWEEP_BETAS = (2.0, 1.0, 0.5, 0.3, 0.05)
#: depletion threshold used by the sweep summary: S(t) below 1% of S(0)
DEPLETION_FRACTION = 0.01


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _trajectory_rows(times, states, extra=None):
    for k, t in enumerate(times):
        row = [_fmt(t)] + [_fmt(v) for v in states[k]]
        if extra is not None:
            row += [_fmt(v) for v in extra[k]]
        yield row


def _out_dir(cfg: ScenarioConfig, override: Optional[str]) -> Path:
    out = Path(override or cfg.out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_simulate(cfg: ScenarioConfig, out: Path, svg: bool) -> int:
    traj = integrate_forward(cfg.initial, None, cfg.params, cfg.grid)
    times = cfg.grid.times()
    _write_csv(out / "trajectory.csv", ("t", "S", "I", "R"),
               _trajectory_rows(times, traj.states))
    if svg:
        from .plots import write_trajectory_svg
        write_trajectory_svg(out / "trajectory.svg", times, traj.states)
    print(f"wrote {out / 'trajectory.csv'}")
    return 0


def _complex_list(values) -> str:
    return ";".join(
        f"{v.real!r}{'+' if v.imag >= 0 else '-'}{abs(v.imag)!r}j" for v in values)


def _cmd_analyze(cfg: ScenarioConfig, out: Path) -> int:
    params = cfg.params
    report = endemic(params)
    e0_report = classify_e0(params)
    lines = [
        f"R0={_fmt(next_gen_r0(params))}",
        f"R0_delta1_form={_fmt(r0_delta1_form(params))}",
        f"E0={_fmt(report.e0.s)},{_fmt(report.e0.i)},{_fmt(report.e0.r)}",
        f"condition_a1_dagger={report.condition_a1[0]}",
        f"condition_a1_underdagger={report.condition_a1[1]}",
        f"condition_a2={report.condition_a2}",
        f"regime={report.regime.value}",
        f"classification_E0={e0_report.classification.value}",
        f"eigenvalues_E0={_complex_list(e0_report.eigenvalues)}",
    ]
    if report.e1 is None:
        lines += ["E1=none", "classification_E1=none"]
    else:
        e1 = report.e1
        e1_report = classify_e1(params)
        lines += [
            f"E1={_fmt(e1.s)},{_fmt(e1.i)},{_fmt(e1.r)}",
            f"classification_E1={e1_report.classification.value}",
            f"eigenvalues_E1={_complex_list(e1_report.eigenvalues)}",
        ]
    text = "\n".join(lines) + "\n"
    (out / "analysis.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0


def _cmd_optimize(cfg: ScenarioConfig, out: Path, svg: bool) -> int:
    result = forward_backward_sweep(cfg.initial, cfg.params, cfg.weights,
                                    cfg.bounds, cfg.active, cfg.grid, cfg.solver)
    uncontrolled = integrate_forward(cfg.initial, None, cfg.params, cfg.grid)
    j_free = objective(uncontrolled, None, cfg.weights)

    times = cfg.grid.times()
    extras = np.hstack([result.schedule.values, result.adjoint_traj.states])
    _write_csv(out / "optimal_trajectory.csv",
               ("t", "S", "I", "R", "u1", "u2", "u3", "z1", "z2", "z3"),
               _trajectory_rows(times, result.state_traj.states, extras))
    summary = "\n".join([
        f"objective_controlled={_fmt(result.objective)}",
        f"objective_uncontrolled={_fmt(j_free)}",
        f"iterations={result.iterations}",
        f"converged={result.converged}",
        f"stationarity_residual={_fmt(result.stationarity_residual)}",
    ]) + "\n"
    (out / "summary.txt").write_text(summary, encoding="utf-8")
    sys.stdout.write(summary)
    if svg:
        from .plots import write_controls_svg, write_trajectory_svg
        write_trajectory_svg(out / "optimal_trajectory.svg", times,
                             result.state_traj.states)
        write_controls_svg(out / "controls.svg", times, result.schedule.values)
    if not result.converged:
        print(f"warning: sweep did not converge within {cfg.solver.max_iters} "
              "iterations; outputs are the last iterate", file=sys.stderr)
        return 2
    return 0


def _cmd_sensitivity(cfg: ScenarioConfig, out: Path, metric: Metric,
                     rel_step: float) -> int:
    entries = rank_parameters(metric, cfg.params, cfg.initial, cfg.grid, rel_step)
    _write_csv(out / "sensitivity.csv",
               ("parameter", "metric", "index", "rel_step"),
               ([e.parameter, e.metric.value, _fmt(e.index), _fmt(e.rel_step)]
                for e in entries))
    print(f"wrote {out / 'sensitivity.csv'}")
    return 0


def first_depletion_time(params: ModelParams, x0: State, dt: float,
                         t_max: float, fraction: float = DEPLETION_FRACTION) -> float:
    """First grid time with S(t) < fraction * S(0), integrating step by step
    and stopping at the crossing (the post-depletion boundary layer is stiff
    and not needed for this measurement). Returns inf if never reached."""
    threshold = fraction * x0.s
    x = x0.as_array()
    rhs = lambda t, y: uncontrolled_rhs(y, params)
    steps = int(round(t_max / dt))
    for k in range(steps):
        x = rk4_step(rhs, x, k * dt, dt)
        if not np.all(np.isfinite(x)):
            raise ArithmeticError(f"integration lost finiteness at t={k * dt:.3g}")
        if x[0] < threshold:
            return (k + 1) * dt
    return float("inf")


def _cmd_sweep(cfg: ScenarioConfig, out: Path, betas: Sequence[float], svg: bool) -> int:
    summary_rows = []
    for beta in betas:
        params = with_param(cfg.params, "beta", beta)
        traj = integrate_forward(cfg.initial, None, params, cfg.grid)
        times = cfg.grid.times()
        tag = _fmt(beta).replace(".", "p").rstrip("0").rstrip("p") or "0"
        path = out / f"sweep_beta_{tag}.csv"
        _write_csv(path, ("t", "S", "I", "R"), _trajectory_rows(times, traj.states))
        depletion = first_depletion_time(params, cfg.initial, cfg.grid.dt,
                                         max(cfg.grid.t_final, 40.0))
        summary_rows.append([
            _fmt(beta), _fmt(depletion),
            _fmt(traj.states[-1, 0]), _fmt(traj.states[-1, 1]), _fmt(traj.states[-1, 2]),
        ])
        if svg:
            from .plots import write_trajectory_svg
            write_trajectory_svg(out / f"sweep_beta_{tag}.svg", times, traj.states,
                                 title=f"beta = {beta}")
    _write_csv(out / "sweep_summary.csv",
               ("beta", "depletion_time", "final_S", "final_I", "final_R"),
               summary_rows)
    print(f"wrote {out / 'sweep_summary.csv'}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crimedyn",
        description="Crime-contagion compartmental model: simulation, "
                    "equilibrium/stability/R0 analysis and optimal policy design.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True,
                       help="scenario file path or bundled scenario name")
        p.add_argument("--out", default=None, help="output directory")

    p_sim = sub.add_parser("simulate", help="integrate the uncontrolled system")
    add_common(p_sim)
    p_sim.add_argument("--svg", action="store_true", help="also write SVG charts")

    p_an = sub.add_parser("analyze", help="equilibria, stability and R0 report")
    add_common(p_an)

    p_opt = sub.add_parser("optimize", help="forward-backward sweep policy solve")
    add_common(p_opt)
    p_opt.add_argument("--svg", action="store_true", help="also write SVG charts")

    p_sens = sub.add_parser("sensitivity", help="parameter elasticity ranking")
    add_common(p_sens)
    p_sens.add_argument("--metric", default=Metric.FINAL_I.value,
                        choices=[m.value for m in Metric])
    p_sens.add_argument("--rel-step", type=float, default=0.01)

    p_sweep = sub.add_parser("sweep", help="re-run the scenario over a list of beta values")
    add_common(p_sweep)
    p_sweep.add_argument("--betas", default=None,
                         help="comma-separated beta values "
                              f"(default {','.join(str(b) for b in DEFAULT_SWEEP_BETAS)})")
    p_sweep.add_argument("--svg", action="store_true", help="also write SVG charts")
    return parser


def run_subcommand(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args.config)
    except (ParseError, ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = _out_dir(cfg, args.out)

    try:
        if args.command == "simulate":
            return _cmd_simulate(cfg, out, args.svg)
        if args.command == "analyze":
            return _cmd_analyze(cfg, out)
        if args.command == "optimize":
            return _cmd_optimize(cfg, out, args.svg)
        if args.command == "sensitivity":
            return _cmd_sensitivity(cfg, out, Metric(args.metric), args.rel_step)
        if args.command == "sweep":
            betas = (DEFAULT_SWEEP_BETAS if args.betas is None
                     else tuple(float(b) for b in args.betas.split(",")))
            return _cmd_sweep(cfg, out, betas, args.svg)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled command {args.command!r}")


def main() -> None:
    sys.exit(run_subcommand())
