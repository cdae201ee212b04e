"""Conditional value at risk (CVaR) of energy distributions.

CVaR_alpha is the mean of the lowest alpha-tail of the energy distribution:
for S samples sorted ascending, the mean of the first ceil(alpha * S); for an
exact distribution, the probability-weighted mean of the lowest alpha
probability mass, with the boundary state counted fractionally. alpha = 1
recovers the plain expectation, small alpha approaches the sample minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedEstimateError


def tail_count(alpha, shots):
    """ceil(alpha * shots), clamped to [1, shots].

    The product is computed with a 1e-9 slack before the ceiling so that float
    excess like 0.01 * 10000 = 100.000000000000014 still yields 100.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    m = math.ceil(alpha * shots - 1e-9)
    return max(1, min(m, shots))


@dataclass(frozen=True)
class CvarEstimate:
    """CVaR value plus sampling metadata. shots is None for exact evaluation.

    std_error is present only for sampled estimates whose tail holds at least
    two samples, otherwise None.
    """

    value: float
    alpha: float
    shots: int | None
    std_error: float | None = None


def cvar_std_error(tail_energies, alpha, shots):
    """Standard error of a sampled CVaR from its tail samples.

    tail_energies must be exactly the ceil(alpha * shots) lowest sampled
    energies. The estimate is sqrt(sum((E_k - mean)^2) / (m * (m - 1))).
    """
    tail = np.asarray(tail_energies, dtype=np.float64)
    m = tail_count(alpha, shots)
    if tail.shape != (m,):
        raise ValueError(f"expected the {m} lowest energies, got {tail.shape[0]}")
    if m < 2:
        raise UndefinedEstimateError("standard error needs a tail of at least 2 samples")
    mean = tail.sum() / m
    return float(np.sqrt(np.sum((tail - mean) ** 2) / (m * (m - 1))))


def cvar_sampled(counts, energy_table, alpha):
    """CVaR of a measured counts map {basis_index: count}.

    Tied energies are interchangeable in the sorted order, so the result does
    not depend on which of the tied states fills the tail boundary.
    """
    if not counts:
        raise ValueError("empty counts map")
    idx = np.fromiter(counts.keys(), dtype=np.int64, count=len(counts))
    cnt = np.fromiter(counts.values(), dtype=np.int64, count=len(counts))
    if np.any(cnt < 0):
        raise ValueError("negative count")
    keep = cnt > 0
    idx, cnt = idx[keep], cnt[keep]
    if idx.size == 0:
        raise ValueError("counts map has no samples")
    shots = int(cnt.sum())
    m = tail_count(alpha, shots)
    energies = energy_table[idx]
    order = np.argsort(energies, kind="stable")
    energies = energies[order]
    cnt = cnt[order]
    cum = np.cumsum(cnt)
    b = int(np.searchsorted(cum, m, side="left"))
    take = cnt[: b + 1].copy()
    take[b] = m - (cum[b - 1] if b > 0 else 0)
    tail = np.repeat(energies[: b + 1], take)
    value = float(tail.sum() / m)
    err = None
    if m >= 2:
        err = cvar_std_error(tail, alpha, shots)
    return CvarEstimate(value=value, alpha=float(alpha), shots=shots, std_error=err)


class EnergyOrder:
    """Ascending sort of an energy table, precomputed once and reused."""

    __slots__ = ("order", "energies")

    def __init__(self, table):
        self.order = np.argsort(table, kind="stable")
        self.energies = table[self.order]


def cvar_exact(state, energy_table, alpha, order=None):
    """Exact (infinite-shot) CVaR of the state's energy distribution.

    The lowest alpha probability mass is averaged, with the boundary state
    entering at fractional weight, so the result is continuous in alpha and
    independent of how ties are ordered.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if order is None:
        order = EnergyOrder(energy_table)
    probs = state.probabilities()
    total = probs.sum()
    sorted_probs = probs[order.order] / total
    cum = np.cumsum(sorted_probs)
    b = int(np.searchsorted(cum, alpha, side="left"))
    if b >= cum.shape[0]:
        b = cum.shape[0] - 1
    weights = sorted_probs[: b + 1].copy()
    weights[b] = alpha - (cum[b - 1] if b > 0 else 0.0)
    value = float(np.sum(order.energies[: b + 1] * weights) / alpha)
    return CvarEstimate(value=value, alpha=float(alpha), shots=None, std_error=None)
