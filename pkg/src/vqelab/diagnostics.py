"""Trainability diagnostics: cost concentration and gradient magnitude.

Cost concentration is the sample variance of the exact CVaR cost over
parameters drawn uniformly from [-pi, pi]^dim; its decay with circuit depth
and width is the barren-plateau signature. The gradient magnitude G is the
mean squared partial derivative of the cost at a given point, from central
finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import build_sia, prepare
from .cvar import EnergyOrder, cvar_exact
from .qubo import MAX_QUBITS, energy_table


@dataclass(frozen=True)
class DiagnosticsResult:
    n: int
    layers: int
    alpha: float
    sample_count: int
    var_delta_c: float | None = None
    g: float | None = None


def cost_concentration(instance, variant="yz", layers=1, alpha=0.01,
                       n_samples=2000, seed=0, cap=MAX_QUBITS):
    """Variance of the exact CVaR over uniformly random parameter vectors."""
    if n_samples < 2:
        raise ValueError("need at least 2 samples for a variance")
    circuit = build_sia(instance, variant=variant, layers=layers)
    table = energy_table(instance, cap=cap)
    order = EnergyOrder(table)
    rng = np.random.default_rng(seed)
    costs = np.empty(n_samples)
    for k in range(n_samples):
        params = rng.uniform(-np.pi, np.pi, circuit.param_count)
        state = prepare(circuit, params, cap=cap)
        costs[k] = cvar_exact(state, table, alpha, order=order).value
    return DiagnosticsResult(n=instance.n, layers=layers, alpha=float(alpha),
                             sample_count=n_samples,
                             var_delta_c=float(np.var(costs, ddof=1)))


def mean_square_gradient(cost, params, fd_step=1e-3):
    """Mean squared central-difference partial of an arbitrary scalar cost.

    2 * dim cost evaluations; O(fd_step^2) bias per partial.
    """
    params = np.asarray(params, dtype=np.float64)
    if params.ndim != 1:
        raise ValueError("params must be a 1-D vector")
    if not fd_step > 0.0:
        raise ValueError("fd_step must be positive")
    acc = 0.0
    for i in range(params.shape[0]):
        shift = np.zeros_like(params)
        shift[i] = fd_step
        derivative = (cost(params + shift) - cost(params - shift)) / (2.0 * fd_step)
        acc += derivative * derivative
    return acc / params.shape[0]


def gradient_magnitude(instance, circuit, params, alpha=0.01, fd_step=1e-3, cap=MAX_QUBITS):
    """Mean squared partial derivative of the exact CVaR cost at `params`.

    Central differences with the given step; 2 * dim circuit preparations.
    """
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (circuit.param_count,):
        raise ValueError(f"expected {circuit.param_count} parameters, got {params.shape}")
    table = energy_table(instance, cap=cap)
    order = EnergyOrder(table)

    def cost(p):
        return cvar_exact(prepare(circuit, p, cap=cap), table, alpha, order=order).value

    return mean_square_gradient(cost, params, fd_step=fd_step)
