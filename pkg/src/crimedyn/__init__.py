"""crimedyn: a compartmental crime-contagion model with saturating incidence,
equilibrium/stability/R0 analysis and three-control optimal policy design."""

from .params import (
    AdjointState,
    Controls,
    CostWeights,
    DegenerateParams,
    DerivedParams,
    ModelParams,
    PARAM_KEYS,
    State,
    param_value,
    with_param,
)
from .model import (
    adjoint_rhs,
    controlled_rhs,
    hamiltonian,
    hamiltonian_u_grad,
    holling,
    holling_deriv,
    running_cost,
    uncontrolled_rhs,
)
from .dynamics import (
    GridMismatch,
    InvarianceReport,
    NonFiniteState,
    TimeGrid,
    Trajectory,
    integrate_backward,
    integrate_forward,
    monitor_invariance,
    rk4_step,
)
from .equilibria import (
    EquilibriumReport,
    Regime,
    check_conditions,
    crime_free,
    endemic,
    removal_level,
)
from .stability import (
    CharCoeffs,
    Classification,
    Method,
    NoEndemicEquilibrium,
    SingularV,
    StabilityReport,
    char_coeffs_e1,
    classify_e0,
    classify_e1,
    eigen3,
    jacobian_at,
    next_gen_r0,
    r0_delta1_form,
)
from .control import (
    ControlBounds,
    ControlSchedule,
    Diverged,
    OptimizationResult,
    SweepOptions,
    forward_backward_sweep,
    objective,
    pointwise_control,
)
from .sensitivity import (
    Metric,
    SensitivityEntry,
    ZeroMetric,
    metric_value,
    rank_parameters,
    sensitivity_index,
)
from .config import (
    ParseError,
    ScenarioConfig,
    ValidationError,
    bundled_scenario_path,
    emit_config,
    parse_config,
    parse_config_file,
    resolve_config,
)

__version__ = "0.1.0"
