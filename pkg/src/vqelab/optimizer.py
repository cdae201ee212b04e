"""Derivative-free minimization behind a pluggable interface.

The driver only relies on this module's contract: evaluate the objective at
most max_evaluations times, record every evaluation in order, and report the
best visited point (first hit on ties). The method underneath is COBYLA, a
trust-region simplex method that handles the noisy sampled objectives here
without gradients; swapping it out means reimplementing `minimize` only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .errors import NonFiniteObjectiveError


@dataclass(frozen=True)
class OptimizerOptions:
    max_evaluations: int
    initial_step: float = 1.0     # initial trust region radius (rhobeg)
    final_accuracy: float = 1e-4  # convergence tolerance on the trust region

    def __post_init__(self):
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be >= 1")
        if not self.initial_step > 0.0:
            raise ValueError("initial_step must be positive")
        if not self.final_accuracy > 0.0:
            raise ValueError("final_accuracy must be positive")
        if not self.final_accuracy < self.initial_step:
            raise ValueError("final_accuracy must be smaller than initial_step")


@dataclass
class MinimizeResult:
    params: np.ndarray
    value: float
    evaluations: int
    history: list = field(repr=False)  # [(params, value), ...] in call order


class _BudgetExhausted(Exception):
    pass


def minimize(objective, x0, options, callback=None):
    """Minimize objective(x) from x0 under an exact evaluation budget.

    Every objective call is recorded; the budget is enforced by this wrapper
    (not trusted to the method), so len(history) <= max_evaluations always. A
    NaN or infinite objective value aborts immediately with the offending
    parameter vector attached.
    """
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    if x0.ndim != 1:
        raise ValueError(f"x0 must be a vector, got shape {x0.shape}")
    history = []

    def wrapped(x):
        if len(history) >= options.max_evaluations:
            raise _BudgetExhausted
        xs = np.array(x, dtype=np.float64, copy=True)
        value = float(objective(xs))
        if not np.isfinite(value):
            raise NonFiniteObjectiveError(f"objective returned {value}", params=xs)
        history.append((xs, value))
        if callback is not None:
            callback(xs, value)
        return value

    try:
        scipy.optimize.minimize(
            wrapped, x0, method="COBYLA",
            options={"rhobeg": options.initial_step,
                     "maxiter": options.max_evaluations,
                     "tol": options.final_accuracy})
    except _BudgetExhausted:
        pass
    if not history:
        raise RuntimeError("optimizer returned without evaluating the objective")
    best = min(range(len(history)), key=lambda k: history[k][1])
    best_x, best_v = history[best]
    return MinimizeResult(params=best_x, value=best_v,
                          evaluations=len(history), history=history)
