import numpy as np
import pytest

from crimedyn import CostWeights, ModelParams, State

#: observed rate table used by the desk-scale experiments
TABLE2 = dict(lam=100.0, phi=0.27, delta1=0.05, delta2=0.02, omega=0.3,
              rho=0.2, gamma1=0.05, gamma2=0.1, alpha=0.4, beta=0.3)

SWEEP_BETAS = (2.0, 1.0, 0.5, 0.3, 0.05)


def table2_params(beta: float = 0.3) -> ModelParams:
    kw = dict(TABLE2)
    kw["beta"] = beta
    return ModelParams(**kw)


def random_params(rng: np.random.Generator) -> ModelParams:
    """Draw rates uniformly from [0, 2], omega from [0, 1], lam from [1, 200]."""
    return ModelParams(
        lam=rng.uniform(1.0, 200.0),
        phi=rng.uniform(0.0, 2.0),
        delta1=rng.uniform(0.0, 2.0),
        delta2=rng.uniform(0.0, 2.0),
        omega=rng.uniform(0.0, 1.0),
        rho=rng.uniform(0.0, 2.0),
        gamma1=rng.uniform(0.0, 2.0),
        gamma2=rng.uniform(0.0, 2.0),
        alpha=rng.uniform(0.0, 2.0),
        beta=rng.uniform(0.0, 2.0),
    )


@pytest.fixture
def params():
    return table2_params()


@pytest.fixture
def cohort():
    return State(1357.0, 136.0, 46.0)


@pytest.fixture
def weights():
    return CostWeights(1.0, 1.0, 1.0)


def central_diff(f, x0: np.ndarray, rel: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient with per-component relative steps."""
    x0 = np.asarray(x0, dtype=float)
    grad = np.empty_like(x0)
    for k in range(x0.size):
        h = rel * max(1.0, abs(x0[k]))
        xp, xm = x0.copy(), x0.copy()
        xp[k] += h
        xm[k] -= h
        grad[k] = (f(xp) - f(xm)) / (2.0 * h)
    return grad
