"""Scenario configuration: INI-style documents with sections
[parameters], [initial], [horizon], [controls], [solver], [output].

Unknown sections or keys are rejected. Missing optional keys take the
documented defaults; the ten rates in [parameters] are always required.
Emitted text round-trips: parse_config(emit_config(cfg)) == cfg.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Tuple

from .control import ControlBounds, SweepOptions
from .dynamics import TimeGrid
from .params import PARAM_KEYS, CostWeights, ModelParams, State, param_value


class ParseError(ValueError):
    """Malformed scenario text (syntax level)."""


class ValidationError(ValueError):
    """Well-formed scenario text violating an invariant; names the field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


_SECTIONS = {
    "parameters": set(PARAM_KEYS),
    "initial": {"s0", "i0", "r0"},
    "horizon": {"t_final", "dt"},
    "controls": {
        "u1_active", "u2_active", "u3_active",
        "u1_min", "u2_min", "u3_min",
        "u1_max", "u2_max", "u3_max",
        "c1", "c2", "c3",
    },
    "solver": {"max_iters", "tol", "relaxation", "u3_compat"},
    "output": {"directory", "emit_svg"},
}

# cohort observed by the youth program: 1539 enrolled, the remainder after
# S and I is taken as initially recovered
_DEFAULT_INITIAL = (1357.0, 136.0, 46.0)
_DEFAULT_T_FINAL = 5.0
_DEFAULT_DT = 0.01


@dataclass(frozen=True)
class ScenarioConfig:
    params: ModelParams
    initial: State
    grid: TimeGrid
    active: Tuple[bool, bool, bool] = (False, False, False)
    bounds: ControlBounds = field(default_factory=ControlBounds)
    weights: CostWeights = field(default_factory=CostWeights)
    solver: SweepOptions = field(default_factory=SweepOptions)
    out_dir: Optional[str] = None
    emit_svg: bool = False


def _get_float(section, section_name: str, key: str, default=None) -> float:
    if section is None or key not in section:
        if default is None:
            raise ValidationError(f"{section_name}.{key}", "required key is missing")
        return default
    raw = section[key]
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"{section_name}.{key}", f"not a number: {raw!r}") from None


def _get_bool(section, section_name: str, key: str, default: bool) -> bool:
    if section is None or key not in section:
        return default
    raw = section[key].strip().lower()
    if raw in ("true", "yes", "on", "1"):
        return True
    if raw in ("false", "no", "off", "0"):
        return False
    raise ValidationError(f"{section_name}.{key}", f"not a boolean: {section[key]!r}")


def _get_int(section, section_name: str, key: str, default: int) -> int:
    if section is None or key not in section:
        return default
    raw = section[key]
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{section_name}.{key}", f"not an integer: {raw!r}") from None


def parse_config(text: str) -> ScenarioConfig:
    """Parse and fully validate a scenario document."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        where = f" (line {lineno})" if lineno else ""
        raise ParseError(f"malformed scenario{where}: {exc.message}") from exc

    for section_name in parser.sections():
        if section_name not in _SECTIONS:
            raise ValidationError(section_name, "unknown section")
        for key in parser[section_name]:
            if key not in _SECTIONS[section_name]:
                raise ValidationError(f"{section_name}.{key}", "unknown key")

    sec = {name: (parser[name] if parser.has_section(name) else None)
           for name in _SECTIONS}

    if sec["parameters"] is None:
        raise ValidationError("parameters", "required section is missing")
    raw_params = {key: _get_float(sec["parameters"], "parameters", key)
                  for key in PARAM_KEYS}
    try:
        params = ModelParams(
            lam=raw_params["lambda"], phi=raw_params["phi"],
            delta1=raw_params["delta1"], delta2=raw_params["delta2"],
            omega=raw_params["omega"], rho=raw_params["rho"],
            gamma1=raw_params["gamma1"], gamma2=raw_params["gamma2"],
            alpha=raw_params["alpha"], beta=raw_params["beta"],
        )
    except ValueError as exc:
        # ModelParams reports which rate is out of range
        name = str(exc).split("'")[1] if "'" in str(exc) else "parameters"
        raise ValidationError(f"parameters.{name}", str(exc)) from exc
    if params.phi <= 0.0:
        raise ValidationError("parameters.phi", "must be > 0")

    initial = State(
        _get_float(sec["initial"], "initial", "s0", _DEFAULT_INITIAL[0]),
        _get_float(sec["initial"], "initial", "i0", _DEFAULT_INITIAL[1]),
        _get_float(sec["initial"], "initial", "r0", _DEFAULT_INITIAL[2]),
    )
    for name, value in zip(("s0", "i0", "r0"), initial):
        if value < 0.0:
            raise ValidationError(f"initial.{name}", "must be >= 0")

    t_final = _get_float(sec["horizon"], "horizon", "t_final", _DEFAULT_T_FINAL)
    dt = _get_float(sec["horizon"], "horizon", "dt", _DEFAULT_DT)
    if t_final <= 0.0:
        raise ValidationError("horizon.t_final", "must be > 0")
    if dt <= 0.0:
        raise ValidationError("horizon.dt", "must be > 0")
    n_steps = round(t_final / dt)
    if n_steps < 1 or abs(n_steps * dt - t_final) > 1e-9 * t_final:
        raise ValidationError("horizon.dt", f"dt={dt!r} does not divide t_final={t_final!r}")
    grid = TimeGrid(0.0, t_final, n_steps)

    c = sec["controls"]
    active = tuple(_get_bool(c, "controls", f"u{k}_active", False) for k in (1, 2, 3))
    lower = tuple(_get_float(c, "controls", f"u{k}_min", 0.0) for k in (1, 2, 3))
    upper = tuple(_get_float(c, "controls", f"u{k}_max", 1.0) for k in (1, 2, 3))
    try:
        bounds = ControlBounds(lower, upper)
    except ValueError as exc:
        raise ValidationError("controls", str(exc)) from exc
    try:
        weights = CostWeights(
            _get_float(c, "controls", "c1", 1.0),
            _get_float(c, "controls", "c2", 1.0),
            _get_float(c, "controls", "c3", 1.0),
        )
    except ValueError as exc:
        name = str(exc).split("'")[1] if "'" in str(exc) else "weights"
        raise ValidationError(f"controls.{name}", str(exc)) from exc

    s = sec["solver"]
    try:
        solver = SweepOptions(
            max_iters=_get_int(s, "solver", "max_iters", 500),
            tol=_get_float(s, "solver", "tol", 1e-6),
            relaxation=_get_float(s, "solver", "relaxation", 0.5),
            u3_compat=_get_bool(s, "solver", "u3_compat", False),
        )
    except ValueError as exc:
        raise ValidationError("solver", str(exc)) from exc

    o = sec["output"]
    out_dir = o["directory"] if (o is not None and "directory" in o) else None
    emit_svg = _get_bool(o, "output", "emit_svg", False)

    return ScenarioConfig(params, initial, grid, active, bounds, weights,
                          solver, out_dir, emit_svg)


def parse_config_file(path) -> ScenarioConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def emit_config(cfg: ScenarioConfig) -> str:
    """Render a config back to scenario text with full-precision numbers."""
    lines = ["[parameters]"]
    lines += [f"{key} = {param_value(cfg.params, key)!r}" for key in PARAM_KEYS]
    lines += ["", "[initial]"]
    lines += [f"{name} = {value!r}" for name, value in
              zip(("s0", "i0", "r0"), cfg.initial)]
    lines += ["", "[horizon]",
              f"t_final = {cfg.grid.t_final!r}",
              f"dt = {cfg.grid.dt!r}"]
    lines += ["", "[controls]"]
    for k in (1, 2, 3):
        lines.append(f"u{k}_active = {str(cfg.active[k - 1]).lower()}")
    for k in (1, 2, 3):
        lines.append(f"u{k}_min = {cfg.bounds.lower[k - 1]!r}")
        lines.append(f"u{k}_max = {cfg.bounds.upper[k - 1]!r}")
    w = cfg.weights
    lines += [f"c1 = {w.c1!r}", f"c2 = {w.c2!r}", f"c3 = {w.c3!r}"]
    lines += ["", "[solver]",
              f"max_iters = {cfg.solver.max_iters}",
              f"tol = {cfg.solver.tol!r}",
              f"relaxation = {cfg.solver.relaxation!r}",
              f"u3_compat = {str(cfg.solver.u3_compat).lower()}"]
    lines += ["", "[output]"]
    if cfg.out_dir is not None:
        lines.append(f"directory = {cfg.out_dir}")
    lines.append(f"emit_svg = {str(cfg.emit_svg).lower()}")
    return "\n".join(lines) + "\n"


def bundled_scenario_path(name: str) -> Path:
    """Filesystem path of a scenario shipped with the package."""
    filename = name if name.endswith(".ini") else f"{name}.ini"
    candidate = resources.files("crimedyn") / "scenarios" / filename
    with resources.as_file(candidate) as path:
        if not path.is_file():
            raise FileNotFoundError(f"no bundled scenario named {name!r}")
        return Path(path)


def resolve_config(ref: str) -> ScenarioConfig:
    """Load a scenario from a filesystem path or a bundled scenario name."""
    path = Path(ref)
    if path.is_file():
        return parse_config_file(path)
    return parse_config_file(bundled_scenario_path(ref))
