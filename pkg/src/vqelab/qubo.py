"""Random QUBO instances in Ising form, exact energies, brute-force ground sets.

Conventions, fixed project-wide:

  * Basis index k encodes qubit i in bit i of k (qubit 0 = least significant).
  * Spin eigenvalue z_i = 1 - 2*bit_i(k), so bit 0 means z = +1.
  * energy(k) = sum_i h_i z_i + sum_{(i,j) in edges} J_ij z_i z_j with i < j,
    edges kept in lexicographic order.

Generated coefficients are drawn uniformly from [-1, 1] and rounded half away
from zero to 4 decimal places. On that grid all energies are exact multiples
of 1e-4, so energy tables are computed in scaled integer arithmetic (stored in
float64, which is exact below 2**53) and ties in the brute-force solver are
exact, not approximate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import backend
from .errors import ResourceLimitError

MAX_QUBITS = 26

_ROUND_DECIMALS = 4
_SCALE = 10.0 ** _ROUND_DECIMALS


def _round_half_away(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) * _SCALE + 0.5) / _SCALE


def complete_edges(n):
    """All pairs (i, j) with i < j, lexicographic."""
    return tuple((i, j) for i in range(n - 1) for j in range(i + 1, n))


@dataclass(frozen=True, eq=False)
class QuboInstance:
    """One Ising-form problem instance.

    Fields h and j are parallel to range(n) and edges respectively. seed is
    the generator seed (0 for hand-built or externally loaded instances).
    """

    n: int
    h: np.ndarray
    edges: tuple
    j: np.ndarray
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 variables, got n={self.n}")
        h = np.asarray(self.h, dtype=np.float64)
        j = np.asarray(self.j, dtype=np.float64)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "edges", tuple((int(i), int(q)) for i, q in self.edges))
        if h.shape != (self.n,):
            raise ValueError(f"h has shape {h.shape}, expected ({self.n},)")
        if j.shape != (len(self.edges),):
            raise ValueError("j must be parallel to edges")
        if not (np.all(np.isfinite(h)) and np.all(np.isfinite(j))):
            raise ValueError("coefficients must be finite")
        seen = set()
        for i, q in self.edges:
            if not (0 <= i < q < self.n):
                raise ValueError(f"bad edge ({i}, {q}) for n={self.n}")
            if (i, q) in seen:
                raise ValueError(f"duplicate edge ({i}, {q})")
            seen.add((i, q))

    @cached_property
    def coupling(self):
        """Map (i, j) -> J_ij for i < j."""
        return {e: float(v) for e, v in zip(self.edges, self.j)}

    @cached_property
    def jmat(self):
        """Dense symmetric coupling matrix with zero diagonal."""
        m = np.zeros((self.n, self.n))
        for (i, q), v in zip(self.edges, self.j):
            m[i, q] = v
            m[q, i] = v
        return m

    @cached_property
    def _scaled(self):
        # Integer-valued (h, jmat) in units of 1e-4 when the coefficients sit
        # on that grid, else the raw values with scale 1. Scaled arithmetic is
        # exact, so energies computed from it agree bitwise everywhere.
        hs = self.h * _SCALE
        js = self.jmat * _SCALE
        hr = np.rint(hs)
        jr = np.rint(js)
        if np.max(np.abs(hs - hr), initial=0.0) < 1e-6 and np.max(np.abs(js - jr), initial=0.0) < 1e-6:
            return hr, jr, _SCALE
        return self.h.copy(), self.jmat.copy(), 1.0


def generate_instance(n, seed, cap=MAX_QUBITS):
    """Draw a complete-graph instance with coefficients uniform in [-1, 1].

    Draw order is h_0..h_{n-1} first, then J for the edges in lexicographic
    order, from a single PCG64 stream seeded with `seed`. Both are rounded
    half away from zero to 4 decimals.
    """
    if n < 2:
        raise ValueError(f"need at least 2 variables, got n={n}")
    if n > cap:
        raise ResourceLimitError(f"n={n} exceeds the qubit cap {cap}")
    rng = np.random.default_rng(seed)
    edges = complete_edges(n)
    h = _round_half_away(rng.uniform(-1.0, 1.0, size=n))
    j = _round_half_away(rng.uniform(-1.0, 1.0, size=len(edges)))
    return QuboInstance(n=n, h=h, edges=edges, j=j, seed=int(seed))


def energy(instance, k):
    """Ising energy of basis state k, bitwise equal to energy_table(...)[k]."""
    if not 0 <= k < (1 << instance.n):
        raise ValueError(f"basis index {k} out of range for n={instance.n}")
    hs, js, scale = instance._scaled
    z = 1.0 - 2.0 * ((k >> np.arange(instance.n)) & 1)
    e = float(hs @ z)
    for i, q in instance.edges:
        e += js[i, q] * z[i] * z[q]
    return e / scale


def energy_table(instance, cap=MAX_QUBITS):
    """Dense energy table over all 2**n basis states."""
    if instance.n > cap:
        raise ResourceLimitError(f"n={instance.n} exceeds the qubit cap {cap}")
    hs, js, scale = instance._scaled
    out = np.empty(1 << instance.n, dtype=np.float64)
    backend.kernels().energy_table(hs, js, out)
    if scale != 1.0:
        out /= scale
    return out


@dataclass(frozen=True, eq=False)
class OptimalSet:
    """Ground energy and the sorted basis indices attaining it."""

    min_energy: float
    states: np.ndarray

    @property
    def degeneracy(self):
        return int(self.states.shape[0])


def brute_force_solve(instance, cap=MAX_QUBITS):
    """Exhaustive ground-state search with exact tie detection.

    Ties are exact equalities of the scaled integer energies for generated
    (4-decimal) instances. For coefficients off that grid, equality is plain
    float comparison of identically computed sums.
    """
    table = energy_table(instance, cap=cap)
    lowest = table.min()
    states = np.flatnonzero(table == lowest)
    return OptimalSet(min_energy=float(lowest), states=states)


def to_dict(instance):
    return {
        "n": instance.n,
        "seed": instance.seed,
        "h": [float(v) for v in instance.h],
        "j": [[i, q, float(v)] for (i, q), v in zip(instance.edges, instance.j)],
    }


def from_dict(data):
    """Build an instance from the interchange dict. Tolerates extra keys."""
    try:
        n = int(data["n"])
        h = [float(v) for v in data["h"]]
        raw_j = data["j"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed instance data: {exc}") from exc
    edges = []
    j = []
    for entry in raw_j:
        if len(entry) != 3:
            raise ValueError(f"coupling entries must be [i, j, value], got {entry!r}")
        edges.append((int(entry[0]), int(entry[1])))
        j.append(float(entry[2]))
    return QuboInstance(n=n, h=np.asarray(h), edges=tuple(edges), j=np.asarray(j),
                        seed=int(data.get("seed", 0)))


def save_instance(instance, path, provenance=None):
    payload = {"format_version": 1}
    if provenance is not None:
        payload["provenance"] = provenance
    payload.update(to_dict(instance))
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_instance(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return from_dict(data)
